from typing import Any, Dict

from graph.state import SubframeState
from lyapunov.queues import update_virtual_queues


def update_virtuals(state: SubframeState) -> Dict[str, Any]:
    config = state["config"]
    powers = state["decision"].powers
    queues = update_virtual_queues(
        state["queues"],
        state["served_ul"],
        state["served_dl"],
        powers.p_ul,
        powers.sbs_dl_power,
        config.delta_ul,
        config.delta_dl,
    )
    return {"queues": queues}
