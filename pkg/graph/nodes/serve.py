from typing import Any, Dict, List

import numpy as np

from graph.state import SubframeState
from harness.ledger import CompletedPacket
from lyapunov.queues import serve_traffic, served_bits
from network.consts import DL, UL
from phy.sinr import evaluate_links, subframe_bits


def serve_queues(state: SubframeState) -> Dict[str, Any]:
    """
    Transmit with the chosen powers, drain the traffic queues by what the
    realized rates carry, then append this subframe's arrivals. Packets served
    now arrived in an earlier subframe, so every delay is at least one.
    """
    config = state["config"]
    decision = state["decision"]
    queues = state["queues"]
    ledger = state["ledger"]
    subframe = state["subframe"]

    evaluation = evaluate_links(
        decision.assignment, decision.powers, state["channel"], config.si_cancellation, config.noise_power
    )
    served_ul = served_bits(subframe_bits(evaluation.sinr_ul, config.rate_scale, config.r_max), queues.q_ul)
    served_dl = served_bits(subframe_bits(evaluation.sinr_dl, config.rate_scale, config.r_max), queues.q_dl)

    completed: List[CompletedPacket] = []
    for direction, served in ((UL, served_ul), (DL, served_dl)):
        for u in np.flatnonzero(served):
            completed.extend(ledger.serve(int(u), direction, int(served[u]), subframe))

    arrivals_ul, arrivals_dl = state["arrivals_ul"], state["arrivals_dl"]
    for direction, batch in ((UL, arrivals_ul), (DL, arrivals_dl)):
        for u, sizes in enumerate(batch.packets):
            ledger.push(u, direction, subframe, sizes)

    return {
        "evaluation": evaluation,
        "served_ul": served_ul,
        "served_dl": served_dl,
        "completed": completed,
        "queues": serve_traffic(queues, served_ul, served_dl, arrivals_ul.bits, arrivals_dl.bits),
    }
