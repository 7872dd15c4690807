import numpy as np
import pytest

from harness.exports import report_json
from harness.replication import run_replication
from lyapunov.arrivals import ArrivalProcess, draw_arrivals
from network.config import make_config
from network.consts import ACTIVE_TALLIES, DL, SCHEME_PROPOSED, SCHEMES, TALLY_IDLE, UL
from network.rng import stream


def _config(**overrides):
    values = dict(
        num_sbs=2,
        num_users=5,
        num_subframes=30,
        mean_packet_size=2e4,
        lambda_ul=100.0,
        lambda_dl=100.0,
    )
    values.update(overrides)
    return make_config(**values)


def test_zero_arrivals_give_an_idle_report() -> None:
    config = _config(lambda_ul=0.0, lambda_dl=0.0, num_subframes=10)
    for scheme in SCHEMES:
        report = run_replication(config, scheme, seed=1).report
        assert report.mode_counts[TALLY_IDLE] == 2 * 10
        assert all(report.mode_counts[t] == 0 for t in ACTIVE_TALLIES)
        assert all(share == 0.0 for share in report.mode_shares.values())
        assert report.mean_packet_throughput == 0.0
        assert report.completed_packets == 0
        assert report.mean_rate_ul == 0.0 and report.mean_rate_dl == 0.0


@pytest.mark.parametrize("scheme", SCHEMES)
def test_bits_are_conserved(scheme) -> None:
    result = run_replication(_config(), scheme, seed=7)
    report = result.report
    assert report.is_conserved
    assert report.arrived_bits[UL] > 0 and report.arrived_bits[DL] > 0

    backlog_ul = np.zeros(5, dtype=np.int64)
    backlog_dl = np.zeros(5, dtype=np.int64)
    for m in result.metrics:
        assert np.all(m.served_ul <= backlog_ul) and np.all(m.served_dl <= backlog_dl)
        backlog_ul = backlog_ul - m.served_ul + m.arrivals_ul
        backlog_dl = backlog_dl - m.served_dl + m.arrivals_dl
        assert np.array_equal(backlog_ul, m.q_ul) and np.array_equal(backlog_dl, m.q_dl)
        assert all(p.delay >= 1 for p in m.completed)
        assert m.modes and len(m.modes) == 2


def test_mode_shares_cover_active_subframes() -> None:
    report = run_replication(_config(), SCHEME_PROPOSED, seed=3).report
    active = sum(report.mode_counts[t] for t in ACTIVE_TALLIES)
    assert active + report.mode_counts[TALLY_IDLE] == 2 * 30
    if active:
        assert sum(report.mode_shares.values()) == pytest.approx(1.0)
    for points in report.cdf.values():
        probabilities = [p.probability for p in points]
        values = [p.value for p in points]
        assert probabilities == sorted(probabilities) and values == sorted(values)
        assert all(0.0 < p <= 1.0 for p in probabilities)


def test_single_light_user_sees_one_subframe_delays() -> None:
    # One user close to its SBS: a subframe carries more than a_max bits, so
    # every packet leaves in the subframe after it arrived.
    config = make_config(
        num_sbs=1,
        num_users=1,
        num_subframes=200,
        mean_packet_size=1e3,
        lambda_ul=50.0,
        lambda_dl=0.0,
        cell_radius=10.0,
        coverage_radius=20.0,
        shadowing_std_db=0.0,
        fast_fading=False,
    )
    result = run_replication(config, "hd-oma", seed=5)

    rng = stream(5, "arrivals")
    process = ArrivalProcess.from_config(config, UL)
    sizes = []
    for _ in range(config.num_subframes - 1):
        sizes.extend(draw_arrivals(process, rng, 1).packets[0].tolist())
    assert sizes

    report = result.report
    assert report.completed_packets == len(sizes)
    assert report.mean_packet_delay == 1.0
    assert report.mean_packet_throughput == pytest.approx(np.mean(sizes) / config.subframe_duration, rel=1e-12)
    assert report.mean_packet_throughput_dl == 0.0


def test_same_seed_gives_identical_reports() -> None:
    config = _config(num_subframes=15)
    for scheme in (SCHEME_PROPOSED, "fd-oma"):
        first = report_json(run_replication(config, scheme, seed=11).report)
        second = report_json(run_replication(config, scheme, seed=11).report)
        assert first == second


def test_schemes_share_topology_and_arrivals() -> None:
    config = _config(num_subframes=10)
    a = run_replication(config, "hd-oma", seed=2)
    b = run_replication(config, "uncoordinated", seed=2)
    assert np.array_equal(a.topology.gains, b.topology.gains)
    for ma, mb in zip(a.metrics, b.metrics):
        assert np.array_equal(ma.arrivals_ul, mb.arrivals_ul)
        assert np.array_equal(ma.arrivals_dl, mb.arrivals_dl)


@pytest.mark.slow
def test_proposed_scheme_keeps_average_power_targets() -> None:
    config = make_config(num_sbs=4, mean_users_per_sbs=5, num_subframes=500)
    report = run_replication(config, SCHEME_PROPOSED, seed=0).report
    assert report.avg_power_ul_max <= 0.5 * config.p_max_ul * 1.05
    assert report.avg_power_dl_max <= 0.9 * config.p_max_dl * 1.05
    assert report.is_conserved


@pytest.mark.slow
def test_light_traffic_queues_stay_mean_rate_stable() -> None:
    config = make_config(
        num_sbs=1,
        num_users=2,
        num_subframes=1000,
        mean_packet_size=500.0,
        lambda_ul=1000.0,
        lambda_dl=1000.0,
        cell_radius=10.0,
        coverage_radius=20.0,
        shadowing_std_db=0.0,
        fast_fading=False,
    )
    result = run_replication(config, SCHEME_PROPOSED, seed=9)
    last = result.metrics[-1]
    horizon = config.num_subframes
    for direction, backlog in ((UL, last.q_ul), (DL, last.q_dl)):
        process = ArrivalProcess.from_config(config, direction)
        per_subframe = process.mean_bits_per_second * config.subframe_duration
        assert backlog.max() / horizon < 0.01 * per_subframe
    assert result.report.is_conserved
