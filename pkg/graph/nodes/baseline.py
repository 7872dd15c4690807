from typing import Any, Dict

from graph.state import SubframeState


def schedule_baseline(state: SubframeState) -> Dict[str, Any]:
    decision = state["policy"].schedule(state["channel"], state["queues"], state["learned"])
    return {"decision": decision}
