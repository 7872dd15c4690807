"""One replication: a network, a scheme and a seed, simulated subframe by subframe."""

from dataclasses import dataclass
from typing import List, Optional

from graph.graph import subframe_graph
from graph.state import SubframeState
from harness.ledger import PacketLedger
from harness.metrics import SubframeMetrics
from harness.report import ExperimentReport, build_report
from logger import log_debug, log_info, log_warning
from lyapunov.queues import QueueState
from matching.learning import LearnedInterference
from network.config import ScenarioConfig
from network.rng import spawn_streams
from network.topology import NetworkTopology, generate_topology
from schedulers.policies import make_policy


@dataclass
class ReplicationResult:
    report: ExperimentReport
    metrics: List[SubframeMetrics]
    topology: NetworkTopology


def initial_state(
    config: ScenarioConfig, scheme: str, seed: int, topology: Optional[NetworkTopology] = None
) -> SubframeState:
    """Empty queues, zero interference estimates and fresh random streams."""
    topology = topology if topology is not None else generate_topology(config, seed)
    return {
        "config": config,
        "policy": make_policy(scheme, config),
        "subframe": 0,
        "topology": topology,
        "channel": topology,
        "streams": spawn_streams(seed),
        "queues": QueueState.zeros(topology.num_users, topology.num_sbs),
        "learned": LearnedInterference.zeros(topology.num_sbs, topology.num_users),
        "ledger": PacketLedger(),
        "evaluation": None,
    }


def run_replication(
    config: ScenarioConfig,
    scheme: str,
    seed: Optional[int] = None,
    topology: Optional[NetworkTopology] = None,
) -> ReplicationResult:
    """
    Simulate config.num_subframes subframes of one scheme. The result is a
    pure function of (config, scheme, seed, topology).
    """
    seed = config.rng_seed if seed is None else seed
    state = initial_state(config, scheme, seed, topology)
    topology = state["topology"]
    log_info(
        f"Replication seed={seed} scheme={scheme}: {topology.num_sbs} SBSs, "
        f"{topology.num_users} users, {config.num_subframes} subframes"
    )

    metrics: List[SubframeMetrics] = []
    for t in range(config.num_subframes):
        state = subframe_graph.invoke({**state, "subframe": t})
        metrics.append(state["metrics"])
        log_debug(f"Subframe {t}: modes {state['metrics'].modes}")

    report = build_report(metrics, config, scheme, seed, topology.num_users, topology.num_sbs)
    if report.ccp_cap_hits:
        log_warning(f"CCP hit its iteration cap in {report.ccp_cap_hits} subframes (seed={seed}, {scheme})")
    if report.matching_nonconverged:
        log_warning(f"Matching hit its round cap in {report.matching_nonconverged} subframes (seed={seed}, {scheme})")
    return ReplicationResult(report=report, metrics=metrics, topology=topology)
