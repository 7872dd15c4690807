from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from harness.ledger import CompletedPacket
from matching.algorithm import MatchingEvent
from phy.sinr import InterferenceBreakdown


@dataclass
class SubframeMetrics:
    """
    Everything one subframe leaves behind for the report.

    Attributes:
        subframe: index t
        arrivals_ul, arrivals_dl: (U,) bits that arrived in t
        served_ul, served_dl: (U,) bits served in t, never more than was queued
        modes: operating mode of every SBS
        q_ul, q_dl, h_ul, h_dl: (U,) queues after the updates of t
        p_ul: (U,) UL transmit power in watts
        p_dl_sbs: (B,) summed DL power of every SBS in watts
        completed: packets whose last bit was served in t
        matching_*: matching statistics, None for schemes without matching
        ccp_*: power optimisation statistics, None when CCP did not run
        warnings: solver messages raised in t
        matching_trace: proposal events, kept only when tracing is enabled
        interference: (user, direction, breakdown) of every served link, kept only when record_interference is set
    """

    subframe: int
    arrivals_ul: np.ndarray
    arrivals_dl: np.ndarray
    served_ul: np.ndarray
    served_dl: np.ndarray
    modes: Tuple[str, ...]
    q_ul: np.ndarray
    q_dl: np.ndarray
    h_ul: np.ndarray
    h_dl: np.ndarray
    p_ul: np.ndarray
    p_dl_sbs: np.ndarray
    completed: List[CompletedPacket] = field(default_factory=list)
    matching_rounds: Optional[int] = None
    matching_proposals: Optional[int] = None
    matching_recalls: Optional[int] = None
    matching_converged: Optional[bool] = None
    ccp_iterations: Optional[int] = None
    ccp_converged: Optional[bool] = None
    ccp_hit_cap: Optional[bool] = None
    ccp_objective_start: Optional[float] = None
    ccp_objective_end: Optional[float] = None
    warnings: List[str] = field(default_factory=list)
    matching_trace: Tuple[MatchingEvent, ...] = ()
    interference: Tuple[Tuple[int, str, InterferenceBreakdown], ...] = ()
