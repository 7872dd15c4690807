"""
Scheduling policies: the proposed matching + power control scheme and the
four comparison schemes. Every policy turns the current channel and queues
into a link assignment and transmit powers for one subframe.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from errors import BarrierMethodError, ConfigError, InfeasiblePowerError
from logger import log_warning
from lyapunov.queues import QueueState
from matching.algorithm import MatchingOutcome, run_matching
from matching.learning import LearnedInterference
from network.config import ScenarioConfig
from network.consts import (
    DL,
    SCHEME_FD_OMA,
    SCHEME_HD_NOMA,
    SCHEME_HD_OMA,
    SCHEME_PROPOSED,
    SCHEME_UNCOORDINATED,
    UL,
)
from network.topology import NetworkTopology
from phy.assignment import CellSchedule, LinkAssignment, PowerAllocation
from phy.power_rules import PowerRule, allocation_from_rule, average_power_rule, baseline_power_rule
from power.ccp import CcpResult, optimize_powers
from power.problem import build_power_problem, strictly_feasible_start

Request = Tuple[int, str]


@dataclass
class ScheduleDecision:
    """
    Attributes:
        assignment: who each SBS serves and in which direction
        powers: transmit powers in watts
        matching: matching outcome for matching-based policies
        ccp: power optimisation result for the proposed policy
        warnings: solver trouble worth reporting
    """

    assignment: LinkAssignment
    powers: PowerAllocation
    matching: Optional[MatchingOutcome] = None
    ccp: Optional[CcpResult] = None
    warnings: List[str] = field(default_factory=list)


class RoundRobin:
    """One pointer per key into a fixed cycle of requests."""

    def __init__(self) -> None:
        self.pointers: Dict[object, int] = {}

    def take(self, key: object, cycle: Sequence, eligible) -> Optional[object]:
        """Next eligible element at or after the pointer; the pointer moves past it."""
        if not cycle:
            return None
        start = self.pointers.get(key, 0) % len(cycle)
        for offset in range(len(cycle)):
            i = (start + offset) % len(cycle)
            if eligible(cycle[i]):
                self.pointers[key] = i + 1
                return cycle[i]
        return None

    def peek_order(self, key: object, cycle: Sequence) -> List:
        """The cycle rotated to start at the pointer."""
        if not cycle:
            return []
        start = self.pointers.get(key, 0) % len(cycle)
        return list(cycle[start:]) + list(cycle[:start])


def _full_power(config: ScenarioConfig, num_sbs: int, num_users: int, ul_sets, dl_sets) -> PowerAllocation:
    powers = PowerAllocation.zeros(num_sbs, num_users)
    for b in range(num_sbs):
        for u in ul_sets[b]:
            powers.p_ul[u] = config.p_max_ul
        for u in dl_sets[b]:
            powers.p_dl[b, u] = config.p_max_dl / len(dl_sets[b])
    return powers


def _backlogged(queues: QueueState):
    return lambda request: queues.backlog(request[1])[request[0]] > 0


def _hd_cycle(channel: NetworkTopology, sbs: int) -> List[Request]:
    """Direction-major cycle over home users: all UL requests, then all DL."""
    users = [int(u) for u in channel.home_users(sbs)]
    return [(u, UL) for u in users] + [(u, DL) for u in users]


def schedule_hd_oma(
    channel: NetworkTopology, queues: QueueState, config: ScenarioConfig, rr: RoundRobin
) -> Tuple[LinkAssignment, PowerAllocation]:
    """One backlogged (user, direction) request per SBS in round robin order, at full power."""
    ul_sets: List[List[int]] = [[] for _ in range(channel.num_sbs)]
    dl_sets: List[List[int]] = [[] for _ in range(channel.num_sbs)]
    for b in range(channel.num_sbs):
        request = rr.take(("hd", b), _hd_cycle(channel, b), _backlogged(queues))
        if request is not None:
            (ul_sets if request[1] == UL else dl_sets)[b].append(request[0])
    assignment = LinkAssignment.from_sets(ul_sets, dl_sets)
    return assignment, _full_power(config, channel.num_sbs, channel.num_users, ul_sets, dl_sets)


def noma_group(users: Sequence[int], gains: np.ndarray, quota: int, ratio: float) -> List[int]:
    """
    Grow a group from the first user while every pair of gain-adjacent members
    keeps a gain ratio of at least ratio.
    """
    group = [users[0]]
    for u in users[1:]:
        if len(group) == quota:
            break
        ordered = sorted(group + [u], key=lambda v: -gains[v])
        if all(gains[a] >= ratio * gains[c] for a, c in zip(ordered, ordered[1:])):
            group.append(u)
        else:
            break
    return group


def schedule_hd_noma(
    channel: NetworkTopology, queues: QueueState, config: ScenarioConfig, rr: RoundRobin
) -> Tuple[LinkAssignment, PowerAllocation]:
    """
    Each SBS picks the direction with the larger summed backlog of its home
    users (ties go to UL) and serves the round robin head, joined by the
    following backlogged users while their gains stay far enough apart.
    """
    ul_sets: List[List[int]] = [[] for _ in range(channel.num_sbs)]
    dl_sets: List[List[int]] = [[] for _ in range(channel.num_sbs)]
    rule = baseline_power_rule(config)
    powers = PowerAllocation.zeros(channel.num_sbs, channel.num_users)
    for b in range(channel.num_sbs):
        users = [int(u) for u in channel.home_users(b)]
        load_ul = int(queues.q_ul[users].sum()) if users else 0
        load_dl = int(queues.q_dl[users].sum()) if users else 0
        if load_ul == 0 and load_dl == 0:
            continue
        direction = UL if load_ul >= load_dl else DL
        backlog = queues.backlog(direction)
        order = [u for u in rr.peek_order((direction, b), users) if backlog[u] > 0]
        rr.take((direction, b), users, lambda u: backlog[u] > 0)
        group = noma_group(order, channel.h_bu[b], config.noma_quota, config.noma_gain_ratio)
        (ul_sets if direction == UL else dl_sets)[b].extend(group)

        cell = CellSchedule(ul=tuple(sorted(ul_sets[b])), dl=tuple(sorted(dl_sets[b])))
        p_ul, p_dl = rule(channel, b, cell)
        for u, p in p_ul.items():
            powers.p_ul[u] = p
        for u, p in p_dl.items():
            powers.p_dl[b, u] = p
    return LinkAssignment.from_sets(ul_sets, dl_sets), powers


def fd_pairing_allowed(channel: NetworkTopology, ul_user: int, dl_user: int, config: ScenarioConfig) -> bool:
    """Pair when the user-user gain is below the threshold, or above it when the flag flips the rule."""
    gain = channel.h_uu[ul_user, dl_user]
    if config.fd_pair_on_high_gain:
        return gain > config.fd_pair_gain_threshold
    return gain < config.fd_pair_gain_threshold


def schedule_fd_oma(
    channel: NetworkTopology, queues: QueueState, config: ScenarioConfig, rr: RoundRobin
) -> Tuple[LinkAssignment, PowerAllocation]:
    """
    Each SBS pairs its UL and DL round robin heads in full duplex when their
    mutual gain allows it, and otherwise falls back to half duplex round robin.
    """
    ul_sets: List[List[int]] = [[] for _ in range(channel.num_sbs)]
    dl_sets: List[List[int]] = [[] for _ in range(channel.num_sbs)]
    for b in range(channel.num_sbs):
        users = [int(u) for u in channel.home_users(b)]
        ul_order = [u for u in rr.peek_order((UL, b), users) if queues.q_ul[u] > 0]
        dl_order = [u for u in rr.peek_order((DL, b), users) if queues.q_dl[u] > 0]
        if ul_order and dl_order:
            u = ul_order[0]
            v = next((w for w in dl_order if w != u), None)
            if v is not None and fd_pairing_allowed(channel, u, v, config):
                rr.take((UL, b), users, lambda w: w == u)
                rr.take((DL, b), users, lambda w: w == v)
                ul_sets[b].append(u)
                dl_sets[b].append(v)
                continue
        request = rr.take(("hd", b), _hd_cycle(channel, b), _backlogged(queues))
        if request is not None:
            (ul_sets if request[1] == UL else dl_sets)[b].append(request[0])
    assignment = LinkAssignment.from_sets(ul_sets, dl_sets)
    return assignment, _full_power(config, channel.num_sbs, channel.num_users, ul_sets, dl_sets)


def match_links(
    channel: NetworkTopology,
    queues: QueueState,
    learned: LearnedInterference,
    config: ScenarioConfig,
    rule: PowerRule,
) -> ScheduleDecision:
    """Run the matching under a fixed power rule and keep that rule's powers."""
    outcome = run_matching(channel, queues, learned, config, rule)
    powers = allocation_from_rule(outcome.assignment, channel, rule)
    return ScheduleDecision(assignment=outcome.assignment, powers=powers, matching=outcome)


def control_power(
    decision: ScheduleDecision, channel: NetworkTopology, queues: QueueState, config: ScenarioConfig
) -> ScheduleDecision:
    """
    Replace the decision's powers by the convex-concave optimum for its
    assignment. Solver failures keep the powers the decision came with.
    """
    assignment = decision.assignment
    if not assignment.ul_links() and not assignment.dl_links():
        return decision

    problem = build_power_problem(assignment, channel, queues, config)
    try:
        x0 = strictly_feasible_start(problem, problem.to_variables(decision.powers), config.sic_halving_steps)
        ccp = optimize_powers(problem, x0, config)
    except (InfeasiblePowerError, BarrierMethodError) as e:
        message = f"Power optimisation failed, keeping matching powers: {e}"
        log_warning(message)
        decision.warnings.append(message)
        return decision

    decision.powers = problem.to_allocation(ccp.solution, channel.num_sbs, channel.num_users)
    decision.ccp = ccp
    decision.warnings.extend(ccp.warnings)
    return decision


def schedule_uncoordinated(
    channel: NetworkTopology, queues: QueueState, learned: LearnedInterference, config: ScenarioConfig
) -> Tuple[LinkAssignment, PowerAllocation, MatchingOutcome]:
    """Matching at full or rank-split powers, with no power optimisation."""
    decision = match_links(channel, queues, learned, config, baseline_power_rule(config))
    return decision.assignment, decision.powers, decision.matching


class SchedulerPolicy(ABC):
    name: str = ""

    def __init__(self, config: ScenarioConfig) -> None:
        self.config = config
        self.rr = RoundRobin()

    def reset(self) -> None:
        self.rr = RoundRobin()

    @property
    def uses_matching(self) -> bool:
        return False

    @property
    def optimizes_power(self) -> bool:
        return False

    def power_rule(self) -> Optional[PowerRule]:
        """Fixed powers the matching values candidate sets with."""
        return None

    @abstractmethod
    def schedule(
        self, channel: NetworkTopology, queues: QueueState, learned: LearnedInterference
    ) -> ScheduleDecision:
        pass


class HdOmaPolicy(SchedulerPolicy):
    name = SCHEME_HD_OMA

    def schedule(self, channel, queues, learned) -> ScheduleDecision:
        assignment, powers = schedule_hd_oma(channel, queues, self.config, self.rr)
        return ScheduleDecision(assignment=assignment, powers=powers)


class HdNomaPolicy(SchedulerPolicy):
    name = SCHEME_HD_NOMA

    def schedule(self, channel, queues, learned) -> ScheduleDecision:
        assignment, powers = schedule_hd_noma(channel, queues, self.config, self.rr)
        return ScheduleDecision(assignment=assignment, powers=powers)


class FdOmaPolicy(SchedulerPolicy):
    name = SCHEME_FD_OMA

    def schedule(self, channel, queues, learned) -> ScheduleDecision:
        assignment, powers = schedule_fd_oma(channel, queues, self.config, self.rr)
        return ScheduleDecision(assignment=assignment, powers=powers)


class UncoordinatedPolicy(SchedulerPolicy):
    name = SCHEME_UNCOORDINATED

    @property
    def uses_matching(self) -> bool:
        return True

    def power_rule(self) -> Optional[PowerRule]:
        return baseline_power_rule(self.config)

    def schedule(self, channel, queues, learned) -> ScheduleDecision:
        return match_links(channel, queues, learned, self.config, self.power_rule())


class ProposedPolicy(SchedulerPolicy):
    name = SCHEME_PROPOSED

    @property
    def uses_matching(self) -> bool:
        return True

    @property
    def optimizes_power(self) -> bool:
        return True

    def power_rule(self) -> Optional[PowerRule]:
        return average_power_rule(self.config)

    def schedule(self, channel, queues, learned) -> ScheduleDecision:
        decision = match_links(channel, queues, learned, self.config, self.power_rule())
        return control_power(decision, channel, queues, self.config)


POLICIES = {
    policy.name: policy
    for policy in (ProposedPolicy, HdOmaPolicy, HdNomaPolicy, FdOmaPolicy, UncoordinatedPolicy)
}


def make_policy(name: str, config: ScenarioConfig) -> SchedulerPolicy:
    try:
        return POLICIES[name](config)
    except KeyError:
        raise ConfigError(f"Unknown scheme '{name}', expected one of {sorted(POLICIES)}")
