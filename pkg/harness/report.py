"""
Replication reports.

This module handles:
- The ExperimentReport model returned by runs, the API and the exports
- Packet and rate throughput statistics, CDFs and mode shares
- Conservation totals and solver diagnostics
"""

from collections import Counter
from typing import Dict, List, Sequence

import numpy as np
from pydantic import BaseModel, Field

from harness.metrics import SubframeMetrics
from network.config import ScenarioConfig
from network.consts import ACTIVE_TALLIES, DIRECTIONS, DL, MODE_TALLY, TALLY_IDLE, UL

EDGE_PERCENTILE = 10.0


class CdfPoint(BaseModel):
    value: float
    probability: float


class ExperimentReport(BaseModel):
    """
    Summary of one replication of one scheme.

    Throughputs are in bits per second. Packet throughput is a packet's size
    over its delay; rate throughput is a user's served bits over the run time.
    Mode shares count SBS-subframes and exclude idle ones.
    """

    scheme: str
    seed: int
    num_sbs: int
    num_users: int
    num_subframes: int
    subframe_duration: float

    mean_packet_throughput: float = 0.0
    mean_packet_throughput_ul: float = 0.0
    mean_packet_throughput_dl: float = 0.0
    completed_packets: int = 0
    mean_packet_delay: float = 0.0

    mean_rate_ul: float = 0.0
    mean_rate_dl: float = 0.0
    edge_rate_ul: float = 0.0
    edge_rate_dl: float = 0.0
    cdf: Dict[str, List[CdfPoint]] = Field(default_factory=dict)

    mode_counts: Dict[str, int] = Field(default_factory=dict)
    mode_shares: Dict[str, float] = Field(default_factory=dict)

    avg_power_ul_mean: float = 0.0
    avg_power_ul_max: float = 0.0
    avg_power_dl_mean: float = 0.0
    avg_power_dl_max: float = 0.0

    arrived_bits: Dict[str, int] = Field(default_factory=dict)
    served_bits: Dict[str, int] = Field(default_factory=dict)
    residual_bits: Dict[str, int] = Field(default_factory=dict)

    ccp_runs: int = 0
    ccp_mean_iterations: float = 0.0
    ccp_cap_hits: int = 0
    matching_runs: int = 0
    matching_mean_rounds: float = 0.0
    matching_mean_proposals: float = 0.0
    matching_recalls: int = 0
    matching_nonconverged: int = 0

    warnings: Dict[str, int] = Field(default_factory=dict)

    @property
    def is_conserved(self) -> bool:
        """Arrived bits equal served plus residual bits in both directions."""
        return all(
            self.arrived_bits.get(d, 0) == self.served_bits.get(d, 0) + self.residual_bits.get(d, 0)
            for d in DIRECTIONS
        )

    def share(self, tally: str) -> float:
        return self.mode_shares.get(tally, 0.0)


def empirical_cdf(values: Sequence[float]) -> List[CdfPoint]:
    """Sorted values with the fraction of samples at or below each."""
    ordered = np.sort(np.asarray(values, dtype=float))
    n = ordered.size
    return [CdfPoint(value=float(v), probability=(i + 1) / n) for i, v in enumerate(ordered)]


def _mean(values: Sequence[float]) -> float:
    return float(np.mean(values)) if len(values) else 0.0


def _percentile(values: np.ndarray, q: float) -> float:
    return float(np.percentile(values, q)) if values.size else 0.0


def mode_tally(metrics: Sequence[SubframeMetrics]) -> Dict[str, int]:
    counts = Counter({tally: 0 for tally in ACTIVE_TALLIES + (TALLY_IDLE,)})
    for m in metrics:
        counts.update(MODE_TALLY[mode] for mode in m.modes)
    return dict(counts)


def mode_shares(counts: Dict[str, int]) -> Dict[str, float]:
    active = sum(counts.get(tally, 0) for tally in ACTIVE_TALLIES)
    if active == 0:
        return {tally: 0.0 for tally in ACTIVE_TALLIES}
    return {tally: counts.get(tally, 0) / active for tally in ACTIVE_TALLIES}


def build_report(
    metrics: Sequence[SubframeMetrics],
    config: ScenarioConfig,
    scheme: str,
    seed: int,
    num_users: int,
    num_sbs: int,
) -> ExperimentReport:
    duration = config.subframe_duration
    num_subframes = len(metrics)
    report = ExperimentReport(
        scheme=scheme,
        seed=seed,
        num_sbs=num_sbs,
        num_users=num_users,
        num_subframes=num_subframes,
        subframe_duration=duration,
    )
    if num_subframes == 0:
        report.arrived_bits = report.served_bits = report.residual_bits = {UL: 0, DL: 0}
        report.mode_counts = mode_tally(metrics)
        report.mode_shares = mode_shares(report.mode_counts)
        return report

    packets = [p for m in metrics for p in m.completed]
    throughputs = {d: [p.throughput(duration) for p in packets if p.direction == d] for d in DIRECTIONS}
    report.completed_packets = len(packets)
    report.mean_packet_throughput = _mean(throughputs[UL] + throughputs[DL])
    report.mean_packet_throughput_ul = _mean(throughputs[UL])
    report.mean_packet_throughput_dl = _mean(throughputs[DL])
    report.mean_packet_delay = _mean([p.delay for p in packets])

    run_time = num_subframes * duration
    served_ul = np.sum([m.served_ul for m in metrics], axis=0)
    served_dl = np.sum([m.served_dl for m in metrics], axis=0)
    rates_ul = served_ul / run_time
    rates_dl = served_dl / run_time
    report.mean_rate_ul = _mean(rates_ul)
    report.mean_rate_dl = _mean(rates_dl)
    report.edge_rate_ul = _percentile(rates_ul, EDGE_PERCENTILE)
    report.edge_rate_dl = _percentile(rates_dl, EDGE_PERCENTILE)
    report.cdf = {
        "packet_throughput": empirical_cdf(throughputs[UL] + throughputs[DL]),
        "rate_ul": empirical_cdf(rates_ul),
        "rate_dl": empirical_cdf(rates_dl),
    }

    report.mode_counts = mode_tally(metrics)
    report.mode_shares = mode_shares(report.mode_counts)

    avg_p_ul = np.mean([m.p_ul for m in metrics], axis=0)
    avg_p_dl = np.mean([m.p_dl_sbs for m in metrics], axis=0)
    report.avg_power_ul_mean = _mean(avg_p_ul)
    report.avg_power_ul_max = float(avg_p_ul.max()) if avg_p_ul.size else 0.0
    report.avg_power_dl_mean = _mean(avg_p_dl)
    report.avg_power_dl_max = float(avg_p_dl.max()) if avg_p_dl.size else 0.0

    last = metrics[-1]
    report.arrived_bits = {
        UL: int(sum(int(m.arrivals_ul.sum()) for m in metrics)),
        DL: int(sum(int(m.arrivals_dl.sum()) for m in metrics)),
    }
    report.served_bits = {UL: int(served_ul.sum()), DL: int(served_dl.sum())}
    report.residual_bits = {UL: int(last.q_ul.sum()), DL: int(last.q_dl.sum())}

    ccp_runs = [m for m in metrics if m.ccp_iterations is not None]
    report.ccp_runs = len(ccp_runs)
    report.ccp_mean_iterations = _mean([m.ccp_iterations for m in ccp_runs])
    report.ccp_cap_hits = sum(1 for m in ccp_runs if m.ccp_hit_cap)

    matched = [m for m in metrics if m.matching_rounds is not None]
    report.matching_runs = len(matched)
    report.matching_mean_rounds = _mean([m.matching_rounds for m in matched])
    report.matching_mean_proposals = _mean([m.matching_proposals for m in matched])
    report.matching_recalls = int(sum(m.matching_recalls for m in matched))
    report.matching_nonconverged = sum(1 for m in matched if not m.matching_converged)

    report.warnings = dict(Counter(w for m in metrics for w in m.warnings))
    return report
