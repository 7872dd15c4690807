"""
User-SBS association and mode selection as a many-to-one matching.

Users propose down their SBS rankings; an SBS keeps the most valuable feasible
subset of its held users and new proposers. After every proposal round a recall
pass lets an SBS take back a user that left it when the user still prefers it
and taking the user strictly raises the SBS's valuation.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Set, Tuple

from logger import log_debug, log_warning
from lyapunov.queues import QueueState
from matching.learning import LearnedInterference
from matching.preferences import Members, PreferenceProfile
from network.config import ScenarioConfig
from network.consts import DL, UL
from network.topology import NetworkTopology
from phy.assignment import LinkAssignment
from phy.power_rules import PowerRule

PROPOSE = "propose"
ACCEPT = "accept"
REJECT = "reject"
DROP = "drop"
RECALL = "recall"


@dataclass(frozen=True)
class MatchingEvent:
    round: int
    kind: str
    sbs: int
    user: int


@dataclass(frozen=True)
class MatchingOutcome:
    """
    Attributes:
        assignment: per-SBS served sets
        user_sbs: matched SBS per user, None when unmatched
        user_direction: direction per matched user, None when unmatched
        rounds: proposal rounds run
        proposals: total proposals made
        recalls: users taken back by an SBS they had left
        converged: False when the round cap stopped the loop
        trace: events, recorded only when the config asks for it
    """

    assignment: LinkAssignment
    user_sbs: Tuple[Optional[int], ...]
    user_direction: Tuple[Optional[str], ...]
    rounds: int
    proposals: int
    recalls: int
    converged: bool
    trace: Tuple[MatchingEvent, ...] = ()

    @property
    def modes(self) -> Tuple[str, ...]:
        return self.assignment.modes


@dataclass
class _MatchState:
    num_sbs: int
    num_users: int
    held: List[Members] = field(default_factory=list)
    user_sbs: List[Optional[int]] = field(default_factory=list)
    user_direction: List[Optional[str]] = field(default_factory=list)
    next_choice: List[int] = field(default_factory=list)
    # Users that proposed to an SBS and are not held there now.
    pool: List[Set[int]] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.held = [() for _ in range(self.num_sbs)]
        self.user_sbs = [None] * self.num_users
        self.user_direction = [None] * self.num_users
        self.next_choice = [0] * self.num_users
        self.pool = [set() for _ in range(self.num_sbs)]

    def held_users(self, sbs: int) -> List[int]:
        return [u for u, _ in self.held[sbs]]


class _Matcher:
    def __init__(self, profile: PreferenceProfile, record: bool) -> None:
        self.profile = profile
        self.record = record
        self.state = _MatchState(profile.num_sbs, profile.num_users)
        self.trace: List[MatchingEvent] = []
        self.round = 0

    def _log(self, kind: str, sbs: int, user: int) -> None:
        if self.record:
            self.trace.append(MatchingEvent(round=self.round, kind=kind, sbs=sbs, user=user))

    def _choose(
        self, sbs: int, users: Iterable[int], keep: Members = (), must_include: Optional[int] = None
    ) -> Members:
        """Best of the enumerated subsets, the kept set and the empty set."""
        profile = self.profile
        users = sorted(set(users))
        best, best_value = profile.best_subset(sbs, users, must_include=must_include)
        options = []
        if best_value is not None:
            options.append((-best_value, len(best), best))
        if must_include is None:
            for fallback in (keep, ()):
                value = profile.value(sbs, fallback)
                if value is not None:
                    options.append((-value, len(fallback), fallback))
        return min(options)[2] if options else ()

    def _install(self, sbs: int, members: Members, considered: Iterable[int]) -> None:
        state = self.state
        chosen = {u for u, _ in members}
        for u in considered:
            if u in chosen:
                continue
            was_held = state.user_sbs[u] == sbs
            if was_held:
                state.user_sbs[u] = None
                state.user_direction[u] = None
            state.pool[sbs].add(u)
            self._log(DROP if was_held else REJECT, sbs, u)
        for u, x in members:
            if state.user_sbs[u] != sbs:
                self._log(ACCEPT, sbs, u)
            state.user_sbs[u] = sbs
            state.user_direction[u] = x
            state.pool[sbs].discard(u)
        state.held[sbs] = members

    def propose_round(self) -> int:
        state, profile = self.state, self.profile
        proposers: Dict[int, List[int]] = {}
        for u in range(state.num_users):
            ranking = profile.ranking(u)
            if state.user_sbs[u] is not None or state.next_choice[u] >= len(ranking):
                continue
            b = ranking[state.next_choice[u]]
            state.next_choice[u] += 1
            proposers.setdefault(b, []).append(u)
        if not proposers:
            return 0

        self.round += 1
        for b in sorted(proposers):
            for u in proposers[b]:
                self._log(PROPOSE, b, u)
            considered = state.held_users(b) + proposers[b]
            self._install(b, self._choose(b, considered, keep=state.held[b]), considered)
        return sum(len(v) for v in proposers.values())

    def recall_pass(self) -> int:
        state, profile = self.state, self.profile
        recalls = 0
        for b in range(state.num_sbs):
            for u in sorted(state.pool[b]):
                current = state.user_sbs[u]
                if u not in state.pool[b] or not profile.prefers(u, b, current):
                    continue
                held_value = profile.value(b, state.held[b])
                considered = state.held_users(b) + [u]
                members = self._choose(b, considered, must_include=u)
                value = profile.value(b, members) if members else None
                if value is None or held_value is None or value <= held_value:
                    continue
                if current is not None:
                    remaining = [v for v in state.held_users(current) if v != u]
                    keep = tuple(m for m in state.held[current] if m[0] != u)
                    state.user_sbs[u] = None
                    state.user_direction[u] = None
                    self._install(current, self._choose(current, remaining, keep=keep), remaining)
                    state.pool[current].add(u)
                self._install(b, members, considered)
                self._log(RECALL, b, u)
                recalls += 1
        return recalls

    def outcome(self, proposals: int, recalls: int, converged: bool) -> MatchingOutcome:
        state = self.state
        assignment = LinkAssignment.from_sets(
            [[u for u, x in held if x == UL] for held in state.held],
            [[u for u, x in held if x == DL] for held in state.held],
        )
        return MatchingOutcome(
            assignment=assignment,
            user_sbs=tuple(state.user_sbs),
            user_direction=tuple(state.user_direction),
            rounds=self.round,
            proposals=proposals,
            recalls=recalls,
            converged=converged,
            trace=tuple(self.trace),
        )


def run_matching(
    channel: NetworkTopology,
    queues: QueueState,
    learned: LearnedInterference,
    config: ScenarioConfig,
    power_rule: PowerRule,
    profile: Optional[PreferenceProfile] = None,
) -> MatchingOutcome:
    """Modified deferred acceptance with a recall pass, capped at matching_max_rounds iterations."""
    profile = profile or PreferenceProfile(channel, queues, learned, config, power_rule)
    matcher = _Matcher(profile, record=config.record_matching_trace)
    proposals = recalls = 0
    converged = False
    for _ in range(config.matching_max_rounds):
        made = matcher.propose_round()
        recalled = matcher.recall_pass()
        proposals += made
        recalls += recalled
        if made == 0 and recalled == 0:
            converged = True
            break

    if not converged:
        log_warning(f"Matching stopped after {config.matching_max_rounds} iterations without converging")
    outcome = matcher.outcome(proposals, recalls, converged)
    log_debug(f"Matching: {outcome.rounds} rounds, {proposals} proposals, {recalls} recalls")
    return outcome


def blocking_pairs(outcome: MatchingOutcome, profile: PreferenceProfile) -> List[Tuple[int, int, str]]:
    """Every (user, sbs, direction) where both would rather add the user to the SBS's set."""
    pairs = []
    cells = outcome.assignment.cells
    for u in range(profile.num_users):
        current = outcome.user_sbs[u]
        for b in profile.ranking(u):
            if b == current or not profile.prefers(u, b, current):
                continue
            held = cells[b].members
            held_value = profile.value(b, held)
            for x in profile.directions(u):
                value = profile.value(b, tuple(sorted(held + ((u, x),))))
                if value is not None and (held_value is None or value > held_value):
                    pairs.append((u, b, x))
    return pairs


def verify_pairwise_stability(
    outcome: MatchingOutcome, profile: PreferenceProfile
) -> Tuple[bool, Optional[Tuple[int, int, str]]]:
    """True when no blocking pair exists; otherwise False and the first one found."""
    pairs = blocking_pairs(outcome, profile)
    return (not pairs, pairs[0] if pairs else None)
