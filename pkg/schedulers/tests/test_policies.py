from collections import Counter
from dataclasses import replace

import numpy as np
import pytest

from errors import ConfigError
from lyapunov.queues import QueueState
from matching.learning import LearnedInterference
from network.config import make_config
from network.consts import (
    DL,
    FD_OMA,
    HD_NOMA_DL,
    HD_OMA_DL,
    HD_OMA_UL,
    IDLE,
    SCHEME_PROPOSED,
    SCHEMES,
    UL,
)
from network.topology import NetworkTopology
from phy.power_rules import allocation_from_rule, average_power_rule
from power.problem import udpo_objective
from schedulers.policies import (
    ProposedPolicy,
    RoundRobin,
    make_policy,
    noma_group,
    schedule_fd_oma,
    schedule_hd_noma,
    schedule_hd_oma,
    schedule_uncoordinated,
)

N0 = 1e-13


def _queues(q_ul, q_dl, num_sbs=1):
    state = QueueState.zeros(len(q_ul), num_sbs)
    return replace(state, q_ul=np.asarray(q_ul, dtype=np.int64), q_dl=np.asarray(q_dl, dtype=np.int64))


def _cell(gains, h_uu=None):
    return NetworkTopology.from_gain_blocks([gains], h_uu=h_uu, home_sbs=np.zeros(len(gains), dtype=int))


def test_hd_oma_alternates_between_two_users() -> None:
    channel = _cell([1e-9, 2e-9])
    config = make_config(num_sbs=1, noise_power_w=N0)
    rr = RoundRobin()
    served = []
    for _ in range(4):
        assignment, powers = schedule_hd_oma(channel, _queues([10, 10], [0, 0]), config, rr)
        served.append(assignment.cells[0].ul)
        assert powers.p_ul[list(assignment.cells[0].ul)][0] == config.p_max_ul
    assert served == [(0,), (1,), (0,), (1,)]


def test_hd_oma_idles_without_backlog() -> None:
    channel = _cell([1e-9, 2e-9])
    config = make_config(num_sbs=1)
    assignment, powers = schedule_hd_oma(channel, _queues([0, 0], [0, 0]), config, RoundRobin())
    assert assignment.modes == (IDLE,)
    assert not powers.p_ul.any() and not powers.p_dl.any()


def test_hd_oma_round_robin_is_fair() -> None:
    channel = _cell([1e-9, 2e-9, 3e-9])
    config = make_config(num_sbs=1)
    rr = RoundRobin()
    counts = Counter()
    for _ in range(6):
        assignment, _ = schedule_hd_oma(channel, _queues([5, 5, 5], [5, 5, 5]), config, rr)
        for u in assignment.cells[0].ul + assignment.cells[0].dl:
            counts[u] += 1
    assert counts == {0: 2, 1: 2, 2: 2}


def test_hd_oma_serves_each_user_within_one_of_the_others() -> None:
    rng = np.random.default_rng(1)
    channel = _cell(list(rng.uniform(1e-10, 1e-9, 5)))
    config = make_config(num_sbs=1)
    rr = RoundRobin()
    counts = Counter()
    for _ in range(37):
        assignment, _ = schedule_hd_oma(channel, _queues([3] * 5, [0] * 5), config, rr)
        counts[assignment.cells[0].ul[0]] += 1
        assert assignment.modes == (HD_OMA_UL,)
    assert max(counts.values()) - min(counts.values()) <= 1


def test_noma_group_respects_gain_ratio() -> None:
    assert noma_group([0, 1], np.array([2e-9, 1e-9]), 2, 2.0) == [0, 1]
    assert noma_group([0, 1], np.array([1.9e-9, 1e-9]), 2, 2.0) == [0]
    assert noma_group([0, 1, 2], np.array([8.0, 4.0, 2.0]), 2, 2.0) == [0, 1]


def test_hd_noma_splits_downlink_power_toward_weak_user() -> None:
    channel = _cell([4e-9, 1e-9])
    config = make_config(num_sbs=1, noma_quota=2)
    assignment, powers = schedule_hd_noma(channel, _queues([1, 1], [50, 50]), config, RoundRobin())
    assert assignment.modes == (HD_NOMA_DL,)
    assert powers.p_dl[0, 1] == pytest.approx(2 / 3 * config.p_max_dl)
    assert powers.p_dl[0, 0] == pytest.approx(1 / 3 * config.p_max_dl)
    assert powers.sbs_dl_power[0] <= config.p_max_dl * (1 + 1e-12)


def test_hd_noma_uplink_gives_strongest_user_most_power() -> None:
    channel = _cell([4e-9, 1e-9])
    config = make_config(num_sbs=1, noma_quota=2)
    assignment, powers = schedule_hd_noma(channel, _queues([50, 50], [50, 50]), config, RoundRobin())
    assert assignment.cells[0].ul == (0, 1)
    assert powers.p_ul[0] == pytest.approx(2 / 3 * config.p_max_ul)
    assert powers.p_ul[1] == pytest.approx(1 / 3 * config.p_max_ul)


def test_hd_noma_close_gains_fall_back_to_single_user() -> None:
    channel = _cell([1.9e-9, 1e-9])
    config = make_config(num_sbs=1, noma_quota=2)
    assignment, powers = schedule_hd_noma(channel, _queues([0, 0], [50, 50]), config, RoundRobin())
    assert assignment.modes == (HD_OMA_DL,)
    assert powers.sbs_dl_power[0] == pytest.approx(config.p_max_dl)


def test_fd_oma_pairs_users_with_weak_mutual_gain() -> None:
    channel = _cell([1e-9, 2e-9], h_uu=[[0, 1e-12], [1e-12, 0]])
    config = make_config(num_sbs=1)
    assignment, powers = schedule_fd_oma(channel, _queues([10, 0], [0, 10]), config, RoundRobin())
    assert assignment.modes == (FD_OMA,)
    assert assignment.cells[0].ul == (0,) and assignment.cells[0].dl == (1,)
    assert powers.p_ul[0] == config.p_max_ul and powers.p_dl[0, 1] == config.p_max_dl


def test_fd_oma_strong_mutual_gain_falls_back_to_half_duplex() -> None:
    channel = _cell([1e-9, 2e-9], h_uu=[[0, 1e-6], [1e-6, 0]])
    config = make_config(num_sbs=1)
    assignment, _ = schedule_fd_oma(channel, _queues([10, 0], [0, 10]), config, RoundRobin())
    assert assignment.modes in ((HD_OMA_UL,), (HD_OMA_DL,))

    flipped = config.with_overrides(fd_pair_on_high_gain=True)
    assignment, _ = schedule_fd_oma(channel, _queues([10, 0], [0, 10]), flipped, RoundRobin())
    assert assignment.modes == (FD_OMA,)


def test_fd_oma_with_uplink_backlog_only_serves_uplink() -> None:
    channel = _cell([1e-9, 2e-9])
    config = make_config(num_sbs=1)
    assignment, _ = schedule_fd_oma(channel, _queues([10, 10], [0, 0]), config, RoundRobin())
    assert assignment.modes == (HD_OMA_UL,)


def test_uncoordinated_isolated_cell_matches_proposed_assignment_at_full_power() -> None:
    channel = _cell([1e-9])
    config = make_config(num_sbs=1, noise_power_w=N0)
    queues = _queues([1000], [0])
    learned = LearnedInterference.zeros(1, 1)
    assignment, powers, _ = schedule_uncoordinated(channel, queues, learned, config)
    proposed = ProposedPolicy(config).schedule(channel, queues, learned)
    assert assignment == proposed.assignment
    assert powers.p_ul[0] == config.p_max_ul


def test_uncoordinated_is_deterministic() -> None:
    rng = np.random.default_rng(3)
    channel = NetworkTopology.from_gain_blocks(rng.uniform(1e-12, 1e-9, size=(2, 5)))
    config = make_config(num_sbs=2)
    queues = _queues(rng.integers(0, 1000, 5), rng.integers(0, 1000, 5), num_sbs=2)
    learned = LearnedInterference.zeros(2, 5)
    first = schedule_uncoordinated(channel, queues, learned, config)
    second = schedule_uncoordinated(channel, queues, learned, config)
    assert first[0] == second[0]
    assert np.array_equal(first[1].p_ul, second[1].p_ul)
    assert np.array_equal(first[1].p_dl, second[1].p_dl)


def test_proposed_powers_beat_matching_powers() -> None:
    h_bu = np.array([[1e-9, 4e-11, 2e-11, 1e-11], [3e-11, 2e-11, 8e-10, 6e-10]])
    h_uu = np.full((4, 4), 5e-11)
    channel = NetworkTopology.from_gain_blocks(h_bu, h_uu=h_uu, h_bb=[[0, 1e-11], [1e-11, 0]])
    config = make_config(num_sbs=2, noise_power_w=N0)
    queues = _queues([8000, 0, 9000, 0], [0, 7000, 0, 6000], num_sbs=2)
    learned = LearnedInterference.zeros(2, 4)
    decision = ProposedPolicy(config).schedule(channel, queues, learned)
    assert decision.ccp is not None
    fixed = allocation_from_rule(decision.assignment, channel, average_power_rule(config))
    optimized = udpo_objective(decision.powers, decision.assignment, queues, channel, config)
    baseline = udpo_objective(fixed, decision.assignment, queues, channel, config)
    assert optimized >= baseline - 1e-6 * abs(baseline)
    assert decision.powers.is_feasible(decision.assignment, config.p_max_ul, config.p_max_dl, tol=1e-9)


def test_every_policy_emits_valid_assignments() -> None:
    rng = np.random.default_rng(11)
    h_bu = rng.uniform(1e-12, 1e-9, size=(3, 9))
    channel = NetworkTopology.from_gain_blocks(h_bu, h_uu=rng.uniform(1e-14, 1e-10, size=(9, 9)))
    config = make_config(num_sbs=3, noma_quota=3)
    learned = LearnedInterference.zeros(3, 9)
    for name in SCHEMES:
        policy = make_policy(name, config)
        assert policy.name == name
        assert policy.uses_matching == (name in ("proposed", "uncoordinated"))
        for _ in range(5):
            queues = _queues(rng.integers(0, 3, 9) * 1000, rng.integers(0, 3, 9) * 1000, num_sbs=3)
            decision = policy.schedule(channel, queues, learned)
            decision.assignment.validate(9, config.noma_quota)
            assert decision.powers.is_feasible(decision.assignment, config.p_max_ul, config.p_max_dl, tol=1e-9)
            for direction, links in ((UL, decision.assignment.ul_links()), (DL, decision.assignment.dl_links())):
                for _, u in links:
                    assert queues.backlog(direction)[u] > 0


def test_unknown_scheme_is_rejected() -> None:
    with pytest.raises(ConfigError):
        make_policy("max-weight", make_config())
    assert make_policy(SCHEME_PROPOSED, make_config()).name == SCHEME_PROPOSED
