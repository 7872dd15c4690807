"""
File outputs of runs and sweeps. Floats are written at full precision and
report.json with sorted keys, so equal runs give byte-identical files.
"""

import json
from collections import Counter
from dataclasses import asdict
from pathlib import Path
from typing import Dict, List, Sequence

import pandas as pd

from harness.replication import ReplicationResult
from harness.report import ExperimentReport
from harness.sweep import SweepRow, aggregate_sweep, rows_frame
from logger import log_success
from matching.algorithm import ACCEPT, DROP, PROPOSE, RECALL, REJECT
from network.consts import ACTIVE_TALLIES, MODE_TALLY, TALLY_IDLE

REPORT_FILE = "report.json"
METRICS_FILE = "metrics.csv"
QUEUES_FILE = "queues.csv"
CDF_FILE = "cdf.csv"
MODES_FILE = "modes.csv"
CCP_FILE = "ccp.csv"
MATCHING_TRACE_FILE = "matching_trace.jsonl"
INTERFERENCE_FILE = "interference.csv"
SWEEP_ROWS_FILE = "sweep_rows.csv"
SWEEP_TABLE_FILE = "sweep.csv"
SWEEP_REPORTS_FILE = "sweep_reports.jsonl"


def report_json(report: ExperimentReport) -> str:
    return json.dumps(report.model_dump(), sort_keys=True, indent=2)


def metrics_frame(result: ReplicationResult) -> pd.DataFrame:
    records = []
    for m in result.metrics:
        tallies = Counter(MODE_TALLY[mode] for mode in m.modes)
        record = {
            "subframe": m.subframe,
            "arrived_ul": int(m.arrivals_ul.sum()),
            "arrived_dl": int(m.arrivals_dl.sum()),
            "served_ul": int(m.served_ul.sum()),
            "served_dl": int(m.served_dl.sum()),
            "backlog_ul": int(m.q_ul.sum()),
            "backlog_dl": int(m.q_dl.sum()),
            "completed_packets": len(m.completed),
            "power_ul": float(m.p_ul.sum()),
            "power_dl": float(m.p_dl_sbs.sum()),
            "matching_rounds": m.matching_rounds,
            "matching_proposals": m.matching_proposals,
            "ccp_iterations": m.ccp_iterations,
        }
        for tally in ACTIVE_TALLIES + (TALLY_IDLE,):
            record[f"sbs_{tally}"] = tallies.get(tally, 0)
        records.append(record)
    return pd.DataFrame.from_records(records)


def queues_frame(result: ReplicationResult) -> pd.DataFrame:
    records = [
        {
            "subframe": m.subframe,
            "user": u,
            "q_ul": int(m.q_ul[u]),
            "q_dl": int(m.q_dl[u]),
            "h_ul": float(m.h_ul[u]),
            "h_dl": float(m.h_dl[u]),
        }
        for m in result.metrics
        for u in range(m.q_ul.shape[0])
    ]
    return pd.DataFrame.from_records(records, columns=["subframe", "user", "q_ul", "q_dl", "h_ul", "h_dl"])


def cdf_frame(report: ExperimentReport) -> pd.DataFrame:
    records = [
        {"metric": metric, "value": point.value, "probability": point.probability}
        for metric, points in sorted(report.cdf.items())
        for point in points
    ]
    return pd.DataFrame.from_records(records, columns=["metric", "value", "probability"])


def modes_frame(report: ExperimentReport) -> pd.DataFrame:
    records = [
        {"mode": tally, "count": report.mode_counts.get(tally, 0), "share": report.share(tally)}
        for tally in ACTIVE_TALLIES
    ]
    records.append({"mode": TALLY_IDLE, "count": report.mode_counts.get(TALLY_IDLE, 0), "share": None})
    return pd.DataFrame.from_records(records, columns=["mode", "count", "share"])


def ccp_frame(result: ReplicationResult) -> pd.DataFrame:
    records = [
        {
            "subframe": m.subframe,
            "iterations": m.ccp_iterations,
            "converged": m.ccp_converged,
            "hit_cap": m.ccp_hit_cap,
            "objective_start": m.ccp_objective_start,
            "objective_end": m.ccp_objective_end,
        }
        for m in result.metrics
        if m.ccp_iterations is not None
    ]
    return pd.DataFrame.from_records(
        records, columns=["subframe", "iterations", "converged", "hit_cap", "objective_start", "objective_end"]
    )


def interference_frame(result: ReplicationResult) -> pd.DataFrame:
    """Interference and noise terms of every served link, in watts."""
    records = []
    for m in result.metrics:
        for user, direction, breakdown in m.interference:
            record = {"subframe": m.subframe, "user": user, "direction": direction}
            record.update(asdict(breakdown))
            record["inter_cell"] = breakdown.inter_cell
            record["intra_cell"] = breakdown.intra_cell
            records.append(record)
    return pd.DataFrame.from_records(records)


def matching_trace_lines(result: ReplicationResult) -> List[str]:
    """One JSON line per (subframe, round) with the event counts of that round."""
    names = {PROPOSE: "proposals", ACCEPT: "accepts", REJECT: "rejects", DROP: "drops", RECALL: "recalls"}
    lines = []
    for m in result.metrics:
        rounds: Dict[int, Counter] = {}
        for event in m.matching_trace:
            rounds.setdefault(event.round, Counter())[names[event.kind]] += 1
        for index in sorted(rounds):
            line = {"subframe": m.subframe, "round": index}
            line.update({name: rounds[index].get(name, 0) for name in names.values()})
            lines.append(json.dumps(line, sort_keys=True))
    return lines


def write_outputs(result: ReplicationResult, out_dir: Path) -> Dict[str, Path]:
    """Write every replication output into out_dir and return the paths written."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {name: out_dir / name for name in (REPORT_FILE, METRICS_FILE, QUEUES_FILE, CDF_FILE, MODES_FILE, CCP_FILE)}

    paths[REPORT_FILE].write_text(report_json(result.report) + "\n")
    metrics_frame(result).to_csv(paths[METRICS_FILE], index=False)
    queues_frame(result).to_csv(paths[QUEUES_FILE], index=False)
    cdf_frame(result.report).to_csv(paths[CDF_FILE], index=False)
    modes_frame(result.report).to_csv(paths[MODES_FILE], index=False)
    ccp_frame(result).to_csv(paths[CCP_FILE], index=False)

    trace = matching_trace_lines(result)
    if trace:
        paths[MATCHING_TRACE_FILE] = out_dir / MATCHING_TRACE_FILE
        paths[MATCHING_TRACE_FILE].write_text("\n".join(trace) + "\n")

    interference = interference_frame(result)
    if not interference.empty:
        paths[INTERFERENCE_FILE] = out_dir / INTERFERENCE_FILE
        interference.to_csv(paths[INTERFERENCE_FILE], index=False)

    log_success(f"Wrote {len(paths)} files to {out_dir}")
    return paths


def write_sweep(rows: Sequence[SweepRow], out_dir: Path) -> Dict[str, Path]:
    """Per-replication rows, the aggregated table and the full reports of a sweep."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {name: out_dir / name for name in (SWEEP_ROWS_FILE, SWEEP_TABLE_FILE, SWEEP_REPORTS_FILE)}

    rows_frame(rows).to_csv(paths[SWEEP_ROWS_FILE], index=False)
    aggregate_sweep(rows).to_csv(paths[SWEEP_TABLE_FILE], index=False)
    paths[SWEEP_REPORTS_FILE].write_text(
        "".join(json.dumps(row.model_dump(), sort_keys=True) + "\n" for row in rows)
    )

    log_success(f"Wrote sweep outputs to {out_dir}")
    return paths
