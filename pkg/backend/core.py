from typing import List

from backend.schemas import RunRequest, SchemeInfo, SweepRequest, SweepResponse, SweepTableRow
from harness.replication import run_replication
from harness.report import ExperimentReport
from harness.sweep import AGGREGATED_FIELDS, aggregate_sweep, run_sweep
from network.config import load_scenario, make_config
from network.consts import SCHEMES
from schedulers.policies import make_policy


def list_schemes() -> List[SchemeInfo]:
    config = make_config()
    infos = []
    for name in SCHEMES:
        policy = make_policy(name, config)
        infos.append(
            SchemeInfo(name=name, uses_matching=policy.uses_matching, optimizes_power=policy.optimizes_power)
        )
    return infos


def run_single(req: RunRequest) -> ExperimentReport:
    """
    Resolve the requested scenario and simulate one replication of one scheme.

    Args:
        req: scenario name, scheme, seed and config overrides

    Returns:
        The replication's ExperimentReport
    """
    config = load_scenario(req.scenario, full_scale=req.full_scale, **req.overrides)
    return run_replication(config, req.scheme, seed=req.seed).report


def run_sweep_table(req: SweepRequest) -> SweepResponse:
    """Run a sweep in-process and return mean and standard error per (value, scheme)."""
    config = load_scenario(req.scenario, full_scale=req.full_scale, **req.overrides)
    rows = run_sweep(config, req.axis, req.values, req.schemes, replications=req.replications, workers=1)
    table = aggregate_sweep(rows)
    return SweepResponse(
        rows=[
            SweepTableRow(
                axis=record["axis"],
                value=record["value"],
                scheme=record["scheme"],
                replications=int(record["replications"]),
                mean={name: float(record[f"{name}_mean"]) for name in AGGREGATED_FIELDS},
                stderr={name: float(record[f"{name}_stderr"]) for name in AGGREGATED_FIELDS},
            )
            for record in table.to_dict(orient="records")
        ]
    )
