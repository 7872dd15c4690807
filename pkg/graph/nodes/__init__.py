from graph.nodes.arrivals import draw_traffic
from graph.nodes.auxiliary import choose_auxiliaries
from graph.nodes.baseline import schedule_baseline
from graph.nodes.channel import realize_channel
from graph.nodes.learning import learn_interference
from graph.nodes.matching import match_users
from graph.nodes.power_control import optimize_power
from graph.nodes.record import record_metrics
from graph.nodes.serve import serve_queues
from graph.nodes.virtual_queues import update_virtuals

__all__ = [
    "draw_traffic",
    "realize_channel",
    "choose_auxiliaries",
    "learn_interference",
    "match_users",
    "schedule_baseline",
    "optimize_power",
    "serve_queues",
    "update_virtuals",
    "record_metrics",
]
