import json

import pandas as pd
import pytest

from harness.exports import (
    CCP_FILE,
    CDF_FILE,
    INTERFERENCE_FILE,
    MATCHING_TRACE_FILE,
    METRICS_FILE,
    MODES_FILE,
    QUEUES_FILE,
    REPORT_FILE,
    SWEEP_TABLE_FILE,
    write_outputs,
    write_sweep,
)
from harness.replication import run_replication
from harness.sweep import AXIS_SI, run_sweep
from network.config import make_config
from network.consts import ACTIVE_TALLIES, DL, SCHEME_FD_OMA, SCHEME_HD_NOMA, SCHEME_PROPOSED, UL


def _config(**overrides):
    values = dict(num_sbs=2, num_users=3, num_subframes=12, mean_packet_size=2e4, lambda_ul=150.0, lambda_dl=150.0)
    values.update(overrides)
    return make_config(**values)


def test_run_outputs_are_written(tmp_path) -> None:
    result = run_replication(_config(record_matching_trace=True), SCHEME_PROPOSED, seed=6)
    paths = write_outputs(result, tmp_path)
    for name in (REPORT_FILE, METRICS_FILE, QUEUES_FILE, CDF_FILE, MODES_FILE, CCP_FILE):
        assert paths[name].exists()

    report = json.loads(paths[REPORT_FILE].read_text())
    assert report["scheme"] == SCHEME_PROPOSED
    assert report["seed"] == 6

    metrics = pd.read_csv(paths[METRICS_FILE])
    assert list(metrics["subframe"]) == list(range(12))
    assert metrics["served_ul"].sum() == report["served_bits"]["UL"]

    queues = pd.read_csv(paths[QUEUES_FILE])
    assert len(queues) == 12 * 3
    assert list(queues.columns) == ["subframe", "user", "q_ul", "q_dl", "h_ul", "h_dl"]

    modes = pd.read_csv(paths[MODES_FILE]).set_index("mode")
    if modes.loc[list(ACTIVE_TALLIES), "count"].sum():
        assert modes.loc[list(ACTIVE_TALLIES), "share"].sum() == pytest.approx(1.0)

    ccp = pd.read_csv(paths[CCP_FILE])
    assert len(ccp) == report["ccp_runs"]

    if report["matching_runs"] and report["matching_mean_proposals"] > 0:
        lines = paths[MATCHING_TRACE_FILE].read_text().splitlines()
        first = json.loads(lines[0])
        assert {"subframe", "round", "proposals", "accepts", "rejects", "recalls"} <= set(first)


def test_report_file_is_byte_identical_across_runs(tmp_path) -> None:
    config = _config()
    first = write_outputs(run_replication(config, SCHEME_HD_NOMA, seed=1), tmp_path / "a")
    second = write_outputs(run_replication(config, SCHEME_HD_NOMA, seed=1), tmp_path / "b")
    for name in (REPORT_FILE, METRICS_FILE, CDF_FILE):
        assert first[name].read_bytes() == second[name].read_bytes()


def test_sweep_outputs_are_written(tmp_path) -> None:
    rows = run_sweep(_config(num_subframes=5), AXIS_SI, [30, 110], [SCHEME_HD_NOMA], replications=2, workers=1)
    paths = write_sweep(rows, tmp_path)
    table = pd.read_csv(paths[SWEEP_TABLE_FILE])
    assert list(table["value"]) == [30.0, 110.0]
    assert list(table["replications"]) == [2, 2]


def test_interference_breakdowns_are_written_on_request(tmp_path) -> None:
    config = _config(lambda_ul=1000.0, lambda_dl=1000.0)
    plain = write_outputs(run_replication(config, SCHEME_FD_OMA, seed=4), tmp_path / "plain")
    assert INTERFERENCE_FILE not in plain

    result = run_replication(config.with_overrides(record_interference=True), SCHEME_FD_OMA, seed=4)
    paths = write_outputs(result, tmp_path / "debug")
    frame = pd.read_csv(paths[INTERFERENCE_FILE])
    assert len(frame) == sum(len(m.interference) for m in result.metrics)
    assert set(frame["direction"]) <= {UL, DL}
    assert (frame["noise"] > 0).all()
    assert (frame[["intra_cell", "self_interference"]] >= 0).all().all()
    assert (frame["inter_cell"] >= -1e-9 * frame["noise"]).all()

    links = set(zip(frame["subframe"], frame["user"], frame["direction"]))
    for m in result.metrics:
        for direction, served in ((UL, m.served_ul), (DL, m.served_dl)):
            for user in served.nonzero()[0]:
                assert (m.subframe, int(user), direction) in links
