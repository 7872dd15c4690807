from typing import Any, Dict

from graph.state import SubframeState
from schedulers.policies import control_power


def optimize_power(state: SubframeState) -> Dict[str, Any]:
    decision = control_power(state["decision"], state["channel"], state["queues"], state["config"])
    return {"decision": decision}
