from typing import Dict, List, Optional, TypedDict

import numpy as np

from harness.ledger import CompletedPacket, PacketLedger
from harness.metrics import SubframeMetrics
from lyapunov.arrivals import ArrivalBatch
from lyapunov.queues import QueueState
from matching.learning import LearnedInterference
from network.config import ScenarioConfig
from network.topology import NetworkTopology
from phy.sinr import LinkEvaluation
from schedulers.policies import SchedulerPolicy, ScheduleDecision


class SubframeState(TypedDict):
    """
    Represents the state of one replication as it passes through a subframe.

    Attributes:
        config: scenario parameters
        policy: scheduling scheme, holding its own round robin pointers
        subframe: index of the subframe being simulated
        topology: large-scale gains of the network
        channel: this subframe's faded gains
        streams: named random generators of the replication
        queues: traffic and virtual queues
        learned: interference estimates used by the matching
        ledger: queued packets for delay accounting
        arrivals_ul, arrivals_dl: this subframe's arrivals
        decision: assignment and powers chosen for this subframe
        evaluation: realized SINRs and measured interference, kept until the next subframe's learning step
        served_ul, served_dl: bits served this subframe
        completed: packets finished this subframe
        metrics: the record of this subframe
    """

    config: ScenarioConfig
    policy: SchedulerPolicy
    subframe: int
    topology: NetworkTopology
    channel: NetworkTopology
    streams: Dict[str, np.random.Generator]
    queues: QueueState
    learned: LearnedInterference
    ledger: PacketLedger
    arrivals_ul: ArrivalBatch
    arrivals_dl: ArrivalBatch
    decision: ScheduleDecision
    evaluation: Optional[LinkEvaluation]
    served_ul: np.ndarray
    served_dl: np.ndarray
    completed: List[CompletedPacket]
    metrics: SubframeMetrics
