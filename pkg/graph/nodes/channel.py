from typing import Any, Dict

from graph.state import SubframeState


def realize_channel(state: SubframeState) -> Dict[str, Any]:
    """Apply this subframe's fast fading to the large-scale gains."""
    topology = state["topology"]
    if not state["config"].fast_fading:
        return {"channel": topology}
    return {"channel": topology.faded(state["streams"]["fading"])}
