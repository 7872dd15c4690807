from typing import Any, Dict

from graph.state import SubframeState
from matching.learning import update_learning


def learn_interference(state: SubframeState) -> Dict[str, Any]:
    """
    Fold the inter-cell interference measured in the previous subframe into
    the running estimates. Receivers that were idle keep their estimate.
    """
    evaluation = state.get("evaluation")
    if evaluation is None:
        return {"learned": state["learned"]}
    config = state["config"]
    learned = update_learning(
        state["learned"], evaluation.measured_sbs, evaluation.measured_user, config.nu1, config.nu2
    )
    return {"learned": learned}
