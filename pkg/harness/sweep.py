"""
Parameter sweeps over traffic intensity, SBS density and SI cancellation.

Every (value, scheme, replication) cell is an independent job. Replication r
uses seed config.rng_seed + r for all values and schemes, so the schemes of one
replication see the same network and the same arrivals.
"""

from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import BaseModel
from tqdm import tqdm

from errors import ConfigError
from harness.replication import run_replication
from harness.report import ExperimentReport
from logger import log_header, log_success
from network.config import ScenarioConfig, db_to_linear
from network.consts import SCHEMES, TALLY_DL_NOMA, TALLY_FD, TALLY_HD_OMA, TALLY_UL_NOMA

AXIS_TRAFFIC = "traffic"
AXIS_DENSITY = "density"
AXIS_SI = "si"
SWEEP_AXES = (AXIS_TRAFFIC, AXIS_DENSITY, AXIS_SI)

AGGREGATED_FIELDS = (
    "mean_packet_throughput",
    "mean_packet_throughput_ul",
    "mean_packet_throughput_dl",
    "mean_rate_ul",
    "mean_rate_dl",
    "edge_rate_ul",
    "edge_rate_dl",
    "share_hd_oma",
    "share_fd",
    "share_ul_noma",
    "share_dl_noma",
    "avg_power_ul_max",
    "avg_power_dl_max",
)


class SweepRow(BaseModel):
    axis: str
    value: float
    scheme: str
    replication: int
    seed: int
    report: ExperimentReport


class SweepJob(BaseModel):
    axis: str
    value: float
    scheme: str
    replication: int
    seed: int
    config: ScenarioConfig


def axis_overrides(axis: str, value: float) -> Dict[str, Any]:
    """
    Config fields one sweep point changes. Traffic values are mean packet
    sizes in kilobits, density values SBS counts at a constant number of users
    per SBS, and SI values cancellation levels in dB.
    """
    if axis == AXIS_TRAFFIC:
        return {"mean_packet_size": float(value) * 1e3}
    if axis == AXIS_DENSITY:
        if value < 1 or int(value) != value:
            raise ConfigError(f"Density sweep values must be positive SBS counts, got {value}")
        return {"num_sbs": int(value), "num_users": None, "sbs_positions": None}
    if axis == AXIS_SI:
        return {"si_cancellation": db_to_linear(float(value))}
    raise ConfigError(f"Unknown sweep axis '{axis}', expected one of {SWEEP_AXES}")


def plan_sweep(
    base: ScenarioConfig,
    axis: str,
    values: Sequence[float],
    schemes: Sequence[str] = SCHEMES,
    replications: Optional[int] = None,
) -> List[SweepJob]:
    replications = base.replications if replications is None else replications
    if replications < 1:
        raise ConfigError("A sweep needs at least one replication")
    unknown = [s for s in schemes if s not in SCHEMES]
    if unknown:
        raise ConfigError(f"Unknown schemes {unknown}, expected some of {SCHEMES}")

    jobs: List[SweepJob] = []
    for value in values:
        config = base.with_overrides(**axis_overrides(axis, value))
        for scheme in schemes:
            for r in range(replications):
                jobs.append(
                    SweepJob(
                        axis=axis,
                        value=float(value),
                        scheme=scheme,
                        replication=r,
                        seed=base.rng_seed + r,
                        config=config,
                    )
                )
    return jobs


def run_job(job: SweepJob) -> SweepRow:
    result = run_replication(job.config, job.scheme, seed=job.seed)
    return SweepRow(
        axis=job.axis,
        value=job.value,
        scheme=job.scheme,
        replication=job.replication,
        seed=job.seed,
        report=result.report,
    )


def run_sweep(
    base: ScenarioConfig,
    axis: str,
    values: Sequence[float],
    schemes: Sequence[str] = SCHEMES,
    replications: Optional[int] = None,
    workers: Optional[int] = None,
) -> List[SweepRow]:
    """Run every job of the sweep, in a process pool when workers > 1. Rows keep plan order."""
    jobs = plan_sweep(base, axis, values, schemes, replications)
    workers = base.workers if workers is None else workers
    log_header(f"Sweep over {axis}: {len(values)} values, {len(schemes)} schemes, {len(jobs)} jobs")

    if workers <= 1:
        rows = [run_job(job) for job in tqdm(jobs, desc=f"sweep {axis}")]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(tqdm(pool.map(run_job, jobs), total=len(jobs), desc=f"sweep {axis}"))

    log_success(f"Sweep over {axis} finished")
    return rows


def rows_frame(rows: Sequence[SweepRow]) -> pd.DataFrame:
    """One line per replication with the aggregated report fields."""
    records = []
    for row in rows:
        report = row.report
        record = {
            "axis": row.axis,
            "value": row.value,
            "scheme": row.scheme,
            "replication": row.replication,
            "seed": row.seed,
            "share_hd_oma": report.share(TALLY_HD_OMA),
            "share_fd": report.share(TALLY_FD),
            "share_ul_noma": report.share(TALLY_UL_NOMA),
            "share_dl_noma": report.share(TALLY_DL_NOMA),
        }
        for name in AGGREGATED_FIELDS:
            record.setdefault(name, getattr(report, name, None))
        records.append(record)
    return pd.DataFrame.from_records(
        records, columns=["axis", "value", "scheme", "replication", "seed", *AGGREGATED_FIELDS]
    )


def aggregate_sweep(rows: Sequence[SweepRow]) -> pd.DataFrame:
    """
    Mean and standard error over replications for every (value, scheme).
    The standard error is 0 for a single replication.
    """
    frame = rows_frame(rows)
    groups = frame.groupby(["axis", "value", "scheme"], sort=True)
    means = groups[list(AGGREGATED_FIELDS)].mean()
    counts = groups.size()
    stds = groups[list(AGGREGATED_FIELDS)].std(ddof=1).fillna(0.0)
    stderr = stds.div(np.sqrt(counts), axis=0)

    table = means.add_suffix("_mean").join(stderr.add_suffix("_stderr"))
    table["replications"] = counts
    return table.reset_index()
