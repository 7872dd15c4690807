import numpy as np
import pandas as pd
import pytest

from errors import ConfigError
from harness.exports import report_json
from harness.replication import run_replication
from harness.report import ExperimentReport
from harness.sweep import (
    AXIS_DENSITY,
    AXIS_SI,
    AXIS_TRAFFIC,
    SweepRow,
    aggregate_sweep,
    axis_overrides,
    plan_sweep,
    run_sweep,
)
from network.config import make_config
from network.consts import SCHEME_HD_OMA, SCHEME_PROPOSED, SCHEME_UNCOORDINATED, TALLY_FD


def _config(**overrides):
    values = dict(num_sbs=2, num_users=4, num_subframes=10, mean_packet_size=2e4, lambda_ul=100.0, lambda_dl=100.0)
    values.update(overrides)
    return make_config(**values)


def test_axis_overrides() -> None:
    assert axis_overrides(AXIS_TRAFFIC, 50) == {"mean_packet_size": 5e4}
    assert axis_overrides(AXIS_SI, 30)["si_cancellation"] == pytest.approx(1e3)
    assert axis_overrides(AXIS_DENSITY, 6) == {"num_sbs": 6, "num_users": None, "sbs_positions": None}
    with pytest.raises(ConfigError):
        axis_overrides("bandwidth", 1.0)
    with pytest.raises(ConfigError):
        axis_overrides(AXIS_DENSITY, 2.5)


def test_plan_uses_one_seed_per_replication() -> None:
    jobs = plan_sweep(_config(rng_seed=40), AXIS_SI, [30, 70], [SCHEME_PROPOSED, SCHEME_HD_OMA], replications=3)
    assert len(jobs) == 2 * 2 * 3
    assert sorted({job.seed for job in jobs}) == [40, 41, 42]
    assert sorted({job.config.si_cancellation_db for job in jobs}) == pytest.approx([30.0, 70.0])
    with pytest.raises(ConfigError):
        plan_sweep(_config(), AXIS_SI, [30], ["max-weight"], replications=1)
    with pytest.raises(ConfigError):
        plan_sweep(_config(), AXIS_SI, [30], replications=0)


def test_single_point_sweep_matches_a_replication() -> None:
    config = _config(rng_seed=8)
    (row,) = run_sweep(config, AXIS_TRAFFIC, [20], [SCHEME_UNCOORDINATED], replications=1, workers=1)
    direct = run_replication(config.with_overrides(mean_packet_size=2e4), SCHEME_UNCOORDINATED, seed=8)
    assert row.seed == 8
    assert report_json(row.report) == report_json(direct.report)


def _row(value, scheme, replication, throughput):
    report = ExperimentReport(
        scheme=scheme,
        seed=replication,
        num_sbs=1,
        num_users=1,
        num_subframes=1,
        subframe_duration=1e-3,
        mean_packet_throughput=throughput,
        mode_shares={TALLY_FD: 0.5},
    )
    return SweepRow(
        axis=AXIS_TRAFFIC, value=value, scheme=scheme, replication=replication, seed=replication, report=report
    )


def test_aggregate_gives_mean_and_standard_error() -> None:
    rows = [
        _row(50, SCHEME_PROPOSED, 0, 1.0),
        _row(50, SCHEME_PROPOSED, 1, 3.0),
        _row(50, SCHEME_HD_OMA, 0, 2.0),
    ]
    table = aggregate_sweep(rows).set_index("scheme")
    assert table.loc[SCHEME_PROPOSED, "mean_packet_throughput_mean"] == pytest.approx(2.0)
    assert table.loc[SCHEME_PROPOSED, "mean_packet_throughput_stderr"] == pytest.approx(1.0)
    assert table.loc[SCHEME_HD_OMA, "mean_packet_throughput_stderr"] == 0.0
    assert table.loc[SCHEME_HD_OMA, "replications"] == 1
    assert table.loc[SCHEME_PROPOSED, "share_fd_mean"] == pytest.approx(0.5)


def _trend(table: pd.DataFrame, column: str):
    return table.sort_values("value")[column].to_numpy()


# Replication means of a mode share may dip by up to two points between sweep
# values without breaking the trend.
TREND_SLACK = 0.02


def _non_decreasing(values, slack=TREND_SLACK):
    return all(b >= a - slack for a, b in zip(values, values[1:]))


@pytest.mark.slow
def test_fd_and_noma_used_more_under_heavier_traffic() -> None:
    base = make_config(num_sbs=4, mean_users_per_sbs=5, num_subframes=500, replications=5)
    rows = run_sweep(base, AXIS_TRAFFIC, [50, 100, 200, 400], [SCHEME_PROPOSED])
    table = aggregate_sweep(rows)
    share = 1.0 - _trend(table, "share_hd_oma_mean")
    assert _non_decreasing(share)


@pytest.mark.slow
def test_fd_used_more_with_better_cancellation() -> None:
    base = make_config(num_sbs=4, mean_users_per_sbs=5, num_subframes=500, replications=5)
    rows = run_sweep(base, AXIS_SI, [30, 50, 70, 90, 110], [SCHEME_PROPOSED])
    assert _non_decreasing(_trend(aggregate_sweep(rows), "share_fd_mean"))


@pytest.mark.slow
def test_dl_noma_used_less_in_denser_networks() -> None:
    base = make_config(num_sbs=4, mean_users_per_sbs=5, num_subframes=500, replications=5)
    rows = run_sweep(base, AXIS_DENSITY, [2, 4, 6, 8], [SCHEME_PROPOSED])
    shares = _trend(aggregate_sweep(rows), "share_dl_noma_mean")
    assert all(b <= a + TREND_SLACK for a, b in zip(shares, shares[1:]))


@pytest.mark.slow
def test_proposed_scheme_leads_at_heavy_traffic() -> None:
    base = make_config(num_sbs=4, mean_users_per_sbs=5, num_subframes=500, replications=5)
    rows = run_sweep(base, AXIS_TRAFFIC, [400], [SCHEME_PROPOSED, SCHEME_UNCOORDINATED, SCHEME_HD_OMA])
    table = aggregate_sweep(rows).set_index("scheme")["mean_packet_throughput_mean"]
    assert table[SCHEME_PROPOSED] >= table[SCHEME_UNCOORDINATED]
    assert min(table[SCHEME_PROPOSED], table[SCHEME_UNCOORDINATED]) >= table[SCHEME_HD_OMA]
