from typing import Any, Dict

from graph.state import SubframeState
from schedulers.policies import match_links


def match_users(state: SubframeState) -> Dict[str, Any]:
    policy = state["policy"]
    decision = match_links(state["channel"], state["queues"], state["learned"], state["config"], policy.power_rule())
    return {"decision": decision}
