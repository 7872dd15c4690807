from typing import Any, Dict

from graph.state import SubframeState
from lyapunov.arrivals import ArrivalProcess, draw_arrivals
from network.consts import DL, UL


def draw_traffic(state: SubframeState) -> Dict[str, Any]:
    config = state["config"]
    rng = state["streams"]["arrivals"]
    num_users = state["topology"].num_users
    # UL is always drawn before DL so the stream stays aligned across schemes.
    arrivals_ul = draw_arrivals(ArrivalProcess.from_config(config, UL), rng, num_users)
    arrivals_dl = draw_arrivals(ArrivalProcess.from_config(config, DL), rng, num_users)
    return {"arrivals_ul": arrivals_ul, "arrivals_dl": arrivals_dl}
