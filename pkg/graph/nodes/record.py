from typing import Any, Dict

from graph.state import SubframeState
from harness.metrics import SubframeMetrics


def record_metrics(state: SubframeState) -> Dict[str, Any]:
    decision = state["decision"]
    queues = state["queues"]
    metrics = SubframeMetrics(
        subframe=state["subframe"],
        arrivals_ul=state["arrivals_ul"].bits,
        arrivals_dl=state["arrivals_dl"].bits,
        served_ul=state["served_ul"],
        served_dl=state["served_dl"],
        modes=decision.assignment.modes,
        q_ul=queues.q_ul,
        q_dl=queues.q_dl,
        h_ul=queues.h_ul,
        h_dl=queues.h_dl,
        p_ul=decision.powers.p_ul.copy(),
        p_dl_sbs=decision.powers.sbs_dl_power,
        completed=state["completed"],
        warnings=list(decision.warnings),
    )

    evaluation = state["evaluation"]
    if state["config"].record_interference and evaluation is not None:
        metrics.interference = tuple((u, d, evaluation.breakdowns[(u, d)]) for u, d in sorted(evaluation.breakdowns))

    outcome = decision.matching
    if outcome is not None:
        metrics.matching_rounds = outcome.rounds
        metrics.matching_proposals = outcome.proposals
        metrics.matching_recalls = outcome.recalls
        metrics.matching_converged = outcome.converged
        metrics.matching_trace = outcome.trace
        if not outcome.converged:
            metrics.warnings.append(f"Matching hit its round cap after {outcome.rounds} rounds")

    ccp = decision.ccp
    if ccp is not None:
        metrics.ccp_iterations = len(ccp.iterations)
        metrics.ccp_converged = ccp.converged
        metrics.ccp_hit_cap = ccp.hit_iteration_cap
        metrics.ccp_objective_start = ccp.trace[0]
        metrics.ccp_objective_end = ccp.objective

    return {"metrics": metrics}
