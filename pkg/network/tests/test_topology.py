import math

import numpy as np
import pytest

from errors import ConfigError, TopologyError
from network.config import db_to_linear, load_scenario, make_config
from network.consts import SBS_USER, USER_USER
from network.topology import NetworkTopology, draw_shadowing, generate_topology, link_gain


def test_link_gain_decreases_with_distance() -> None:
    assert link_gain(SBS_USER, 20.0, 0.0) > link_gain(SBS_USER, 40.0, 0.0)
    assert link_gain(USER_USER, 5.0, 3.0) > link_gain(USER_USER, 10.0, 3.0)


def test_link_gain_at_cell_edge_matches_hand_evaluation() -> None:
    # 140.7 + 36.7 * log10(0.04) = 89.394... dB
    expected_db = 140.7 + 36.7 * math.log10(40.0 / 1000.0)
    assert link_gain(SBS_USER, 40.0, 0.0) == pytest.approx(10 ** (-expected_db / 10), rel=1e-12)


def test_link_gain_floors_distance_at_one_meter() -> None:
    assert link_gain(SBS_USER, 0.0, 0.0) == link_gain(SBS_USER, 1.0, 0.0)


def test_shadowing_sample_std() -> None:
    rng = np.random.default_rng(7)
    table = draw_shadowing(rng, 450, 4.0)
    draws = table[np.triu_indices(450, k=1)][:100_000]
    assert len(draws) == 100_000
    assert np.std(draws) == pytest.approx(4.0, rel=0.02)
    assert np.allclose(table, table.T)


def test_single_user_lies_inside_forced_cell() -> None:
    config = make_config(num_sbs=1, sbs_positions=[(250.0, 250.0)], num_users=1)
    topology = generate_topology(config, seed=3)
    distance = np.linalg.norm(topology.user_positions[0] - topology.sbs_positions[0])
    assert distance <= 40.0
    assert topology.home_sbs.tolist() == [0]


def test_generation_is_deterministic() -> None:
    config = make_config()
    first = generate_topology(config, seed=11)
    second = generate_topology(config, seed=11)
    assert np.array_equal(first.gains, second.gains)
    assert np.array_equal(first.user_positions, second.user_positions)


def test_mean_user_count_over_many_seeds() -> None:
    config = make_config(num_sbs=4, mean_users_per_sbs=10)
    counts = [generate_topology(config, seed=s).num_users for s in range(1000)]
    assert np.mean(counts) == pytest.approx(40.0, rel=0.02)


def test_gain_table_is_reciprocal_positive_and_home_within_radius() -> None:
    config = make_config(num_sbs=3, mean_users_per_sbs=6)
    topology = generate_topology(config, seed=5)
    n = topology.num_sbs + topology.num_users
    off_diagonal = topology.gains[~np.eye(n, dtype=bool)]
    assert np.all(off_diagonal > 0) and np.all(np.isfinite(off_diagonal))
    assert np.array_equal(topology.gains, topology.gains.T)
    for u in range(topology.num_users):
        home = topology.sbs_positions[topology.home_sbs[u]]
        assert np.linalg.norm(topology.user_positions[u] - home) <= config.cell_radius + 1e-9
        assert topology.coverage[topology.home_sbs[u], u]


def test_faded_channel_stays_reciprocal() -> None:
    topology = generate_topology(make_config(num_sbs=2), seed=1)
    faded = topology.faded(np.random.default_rng(0))
    assert np.array_equal(faded.gains, faded.gains.T)
    assert not np.array_equal(faded.gains, topology.gains)


def test_zero_sbs_is_rejected() -> None:
    with pytest.raises(TopologyError):
        generate_topology(make_config(num_sbs=0), seed=0)


def test_area_too_small_is_rejected() -> None:
    with pytest.raises(TopologyError):
        generate_topology(make_config(area_side=50.0), seed=0)


def test_json_dump_round_trip(tmp_path) -> None:
    topology = generate_topology(make_config(num_sbs=2), seed=9)
    path = tmp_path / "topology.json"
    topology.dump_json(path)
    loaded = NetworkTopology.load_json(path)
    assert np.array_equal(loaded.gains, topology.gains)
    assert np.array_equal(loaded.coverage, topology.coverage)


def test_invalid_config_raises_config_error() -> None:
    with pytest.raises(ConfigError):
        make_config(nu1=0.0)
    with pytest.raises(ConfigError):
        make_config(noma_quota=0)
    with pytest.raises(ConfigError):
        make_config(p_max_ul=0.1, delta_ul=0.2)


def test_power_targets_follow_budgets() -> None:
    config = make_config()
    assert config.delta_ul == pytest.approx(0.05)
    assert config.delta_dl == pytest.approx(0.9 * 0.158489)
    halved = config.with_overrides(p_max_dl=0.1)
    assert halved.delta_dl == pytest.approx(0.09)


def test_derived_quantities() -> None:
    config = make_config()
    assert config.noise_power == pytest.approx(10 ** (-16.5) / 1000 * 1e7, rel=1e-9)
    assert config.rate_scale == pytest.approx(1e4)
    assert config.r_max == pytest.approx(1e4 * math.log2(1 + db_to_linear(30.0)))
    assert config.a_max == 2_000_000
    assert config.si_cancellation_db == pytest.approx(110.0)


def test_named_scenarios_resolve(tmp_path) -> None:
    desk = load_scenario("desk")
    assert desk.num_sbs == 4 and desk.num_subframes == 500
    full = load_scenario("desk", full_scale=True)
    assert full.num_sbs == 10 and full.num_subframes == 4000
    flat = tmp_path / "mine.yaml"
    flat.write_text("num_sbs: 2\nlambda_ul: 0.0\n")
    custom = load_scenario("desk", config_file=flat, num_subframes=20)
    assert (custom.num_sbs, custom.lambda_ul, custom.num_subframes) == (2, 0.0, 20)
    with pytest.raises(ConfigError):
        load_scenario("no-such-scenario")
