import numpy as np
import pytest

from graph.consts import BASELINE, MATCHING, POWER_CONTROL, SERVE
from graph.graph import route_power, route_scheduler, subframe_graph
from graph.nodes import learn_interference
from harness.replication import initial_state
from matching.learning import LearnedInterference
from network.config import make_config
from network.consts import IDLE, SCHEMES
from phy.sinr import LinkEvaluation
from schedulers.policies import make_policy


def _config(**overrides):
    values = dict(num_sbs=2, num_users=4, num_subframes=5, mean_packet_size=2e4, lambda_ul=200.0, lambda_dl=200.0)
    values.update(overrides)
    return make_config(**values)


@pytest.mark.parametrize(
    "scheme, scheduler_node, power_node",
    [
        ("proposed", MATCHING, POWER_CONTROL),
        ("uncoordinated", MATCHING, SERVE),
        ("hd-oma", BASELINE, None),
        ("hd-noma", BASELINE, None),
        ("fd-oma", BASELINE, None),
    ],
)
def test_routing_follows_the_scheme(scheme, scheduler_node, power_node) -> None:
    state = {"policy": make_policy(scheme, _config()), "subframe": 0}
    assert route_scheduler(state) == scheduler_node
    if power_node is not None:
        assert route_power(state) == power_node


def test_first_subframe_only_queues_arrivals() -> None:
    config = _config()
    for scheme in SCHEMES:
        state = initial_state(config, scheme, seed=4)
        out = subframe_graph.invoke({**state, "subframe": 0})
        metrics = out["metrics"]
        assert metrics.subframe == 0
        assert metrics.modes == (IDLE, IDLE)
        assert not metrics.served_ul.any() and not metrics.served_dl.any()
        assert np.array_equal(out["queues"].q_ul, metrics.arrivals_ul)
        assert np.array_equal(out["queues"].q_dl, metrics.arrivals_dl)


def test_invocations_advance_one_subframe_each() -> None:
    config = _config()
    state = initial_state(config, "proposed", seed=9)
    total_ul = np.zeros(4, dtype=np.int64)
    served_ul = np.zeros(4, dtype=np.int64)
    for t in range(3):
        state = subframe_graph.invoke({**state, "subframe": t})
        assert state["metrics"].subframe == t
        total_ul += state["metrics"].arrivals_ul
        served_ul += state["metrics"].served_ul
    assert np.array_equal(state["queues"].q_ul, total_ul - served_ul)
    assert state["ledger"].queued_bits(0, "UL") == state["queues"].q_ul[0]


def test_power_queues_track_chosen_powers() -> None:
    config = _config()
    state = initial_state(config, "hd-oma", seed=2)
    for t in range(2):
        before = state["queues"]
        state = subframe_graph.invoke({**state, "subframe": t})
        powers = state["decision"].powers
        expected = np.maximum(before.z_ul - config.delta_ul, 0.0) + powers.p_ul
        assert np.allclose(state["queues"].z_ul, expected)


def test_learning_skips_the_first_subframe_and_idle_receivers() -> None:
    config = _config(nu1=0.5, nu2=0.25)
    state = {"config": config, "learned": LearnedInterference.zeros(2, 3), "evaluation": None}
    assert learn_interference(state)["learned"] is state["learned"]

    state["evaluation"] = LinkEvaluation(
        sinr_ul=np.zeros(3),
        sinr_dl=np.zeros(3),
        measured_sbs=np.array([2e-12, np.nan]),
        measured_user=np.array([np.nan, 4e-12, np.nan]),
        breakdowns={},
    )
    learned = learn_interference(state)["learned"]
    assert learned.i_hat == pytest.approx([1e-12, 0.0])
    assert learned.j_hat == pytest.approx([0.0, 1e-12, 0.0])
