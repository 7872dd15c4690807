from langgraph.graph import END, StateGraph

from graph.consts import (
    ARRIVALS,
    AUXILIARY,
    BASELINE,
    CHANNEL,
    LEARNING,
    MATCHING,
    POWER_CONTROL,
    RECORD,
    SERVE,
    VIRTUAL_QUEUES,
)
from graph.nodes import *
from graph.state import SubframeState
from logger import log_debug


def route_scheduler(state: SubframeState) -> str:
    """Matching-based schemes go through the matching node, the others through their own rule."""
    if state["policy"].uses_matching:
        return MATCHING
    return BASELINE


def route_power(state: SubframeState) -> str:
    if state["policy"].optimizes_power:
        return POWER_CONTROL
    log_debug(f"Subframe {state['subframe']}: keeping matching powers")
    return SERVE


def build_subframe_graph():
    workflow = StateGraph(SubframeState)
    workflow.add_node(ARRIVALS, draw_traffic)
    workflow.add_node(CHANNEL, realize_channel)
    workflow.add_node(AUXILIARY, choose_auxiliaries)
    workflow.add_node(LEARNING, learn_interference)
    workflow.add_node(MATCHING, match_users)
    workflow.add_node(BASELINE, schedule_baseline)
    workflow.add_node(POWER_CONTROL, optimize_power)
    workflow.add_node(SERVE, serve_queues)
    workflow.add_node(VIRTUAL_QUEUES, update_virtuals)
    workflow.add_node(RECORD, record_metrics)

    workflow.set_entry_point(ARRIVALS)
    workflow.add_edge(ARRIVALS, CHANNEL)
    workflow.add_edge(CHANNEL, AUXILIARY)
    workflow.add_edge(AUXILIARY, LEARNING)
    workflow.add_conditional_edges(LEARNING, route_scheduler, {MATCHING: MATCHING, BASELINE: BASELINE})
    workflow.add_conditional_edges(MATCHING, route_power, {POWER_CONTROL: POWER_CONTROL, SERVE: SERVE})
    workflow.add_edge(BASELINE, SERVE)
    workflow.add_edge(POWER_CONTROL, SERVE)
    workflow.add_edge(SERVE, VIRTUAL_QUEUES)
    workflow.add_edge(VIRTUAL_QUEUES, RECORD)
    workflow.add_edge(RECORD, END)
    return workflow.compile()


subframe_graph = build_subframe_graph()
