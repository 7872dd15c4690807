from typing import Any, Dict

from graph.state import SubframeState
from lyapunov.queues import select_auxiliaries


def choose_auxiliaries(state: SubframeState) -> Dict[str, Any]:
    config = state["config"]
    return {"queues": select_auxiliaries(state["queues"], config.lyapunov_v, config.r_max)}
