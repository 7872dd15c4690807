"""
Preferences of users and SBSs in the association / mode selection game.

A candidate set at an SBS is a sorted tuple of (user, direction) members.
Users rank SBSs by their estimated weighted rate as a lone user; SBSs value
a candidate set by its estimated utility at the fixed matching-phase powers.
"""

import itertools
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from errors import InfeasibleSetError
from lyapunov.queues import QueueState
from matching.learning import LearnedInterference
from network.config import ScenarioConfig
from network.consts import DL, UL
from network.topology import NetworkTopology
from phy.assignment import CellSchedule
from phy.power_rules import PowerRule
from phy.sinr import cell_sic_margins, estimated_cell_sinrs

Member = Tuple[int, str]
Members = Tuple[Member, ...]


@dataclass(frozen=True)
class UtilityTerms:
    """
    Estimated utility of one candidate set.

    Attributes:
        psi: weighted rate (bits) per member
        omega_user: UL power-queue term per UL member
        omega_sbs: DL power-queue term of the SBS
    """

    psi: Dict[Member, float]
    omega_user: Dict[int, float]
    omega_sbs: float

    @property
    def value(self) -> float:
        return self.omega_sbs + sum(self.psi.values()) + sum(self.omega_user.values())


def check_structure(sbs: int, cell: CellSchedule, quota: int) -> None:
    users = cell.ul + cell.dl
    if len(set(users)) != len(users):
        raise InfeasibleSetError(sbs, users, "a user appears in both directions")
    if cell.ul and cell.dl and (len(cell.ul) > 1 or len(cell.dl) > 1):
        raise InfeasibleSetError(sbs, users, "full duplex cannot be combined with NOMA")
    if len(cell.ul) > quota or len(cell.dl) > quota:
        raise InfeasibleSetError(sbs, users, f"more than {quota} users in one direction")


class PreferenceProfile:
    """Estimated preferences of every user and SBS for one matching run."""

    def __init__(
        self,
        channel: NetworkTopology,
        queues: QueueState,
        learned: LearnedInterference,
        config: ScenarioConfig,
        power_rule: PowerRule,
    ) -> None:
        self.channel = channel
        self.learned = learned
        self.config = config
        self.power_rule = power_rule
        self.weights = {UL: queues.weights(UL), DL: queues.weights(DL)}
        self.z_ul = queues.z_ul
        self.z_dl = queues.z_dl
        self.num_users = channel.num_users
        self.num_sbs = channel.num_sbs
        self._values: Dict[Tuple[int, Members], Optional[float]] = {}
        self._rankings: Dict[int, List[int]] = {}

    def directions(self, user: int) -> List[str]:
        """Directions in which serving the user has positive weight."""
        return [x for x in (UL, DL) if self.weights[x][user] > 0]

    def utility_terms(self, sbs: int, members: Sequence[Member]) -> UtilityTerms:
        """Psi and Omega terms of a candidate set; raises InfeasibleSetError."""
        cell = CellSchedule.from_members(members)
        check_structure(sbs, cell, self.config.noma_quota)

        ul_powers, dl_powers = self.power_rule(self.channel, sbs, cell)
        p_ul = np.zeros(self.num_users)
        p_dl = np.zeros(self.num_users)
        for u, p in ul_powers.items():
            p_ul[u] = p
        for u, p in dl_powers.items():
            p_dl[u] = p

        noise, zeta = self.config.noise_power, self.config.si_cancellation
        if len(cell.dl) > 1:
            external = {u: float(self.learned.j_hat[u]) for u in cell.dl}
            margins = cell_sic_margins(self.channel, sbs, cell, p_dl, external, noise)
            if any(m < 0 for m in margins.values()):
                raise InfeasibleSetError(sbs, cell.dl, "SIC fails for the DL NOMA group")

        sinrs = estimated_cell_sinrs(
            self.channel, sbs, cell, p_ul, p_dl, float(self.learned.i_hat[sbs]), self.learned.j_hat, zeta, noise
        )
        psi = {
            (u, x): float(self.weights[x][u] * self.config.rate_scale * np.log2(1.0 + s))
            for (u, x), s in sinrs.items()
        }
        omega_user = {u: float(self.z_ul[u] * (self.config.delta_ul - p_ul[u])) for u in cell.ul}
        omega_sbs = float(self.z_dl[sbs] * (self.config.delta_dl - p_dl.sum()))
        return UtilityTerms(psi=psi, omega_user=omega_user, omega_sbs=omega_sbs)

    def value(self, sbs: int, members: Members) -> Optional[float]:
        """Cached SBS valuation, None when the set is infeasible."""
        key = (sbs, members)
        if key not in self._values:
            if not members:
                self._values[key] = float(self.z_dl[sbs] * self.config.delta_dl)
            else:
                try:
                    self._values[key] = self.utility_terms(sbs, members).value
                except InfeasibleSetError:
                    self._values[key] = None
        return self._values[key]

    def scores(self, user: int) -> Dict[int, float]:
        """Sum over directions of the user's lone weighted rate at each covering SBS."""
        out = {}
        for b in self.channel.covering_sbs(user):
            b = int(b)
            total = 0.0
            for x in self.directions(user):
                total += self.utility_terms(b, ((user, x),)).psi[(user, x)]
            out[b] = total
        return out

    def ranking(self, user: int) -> List[int]:
        """SBSs worth proposing to, best first; ties go to the lower SBS index."""
        if user not in self._rankings:
            scores = self.scores(user)
            ranked = sorted((b for b, s in scores.items() if s > 0), key=lambda b: (-scores[b], b))
            self._rankings[user] = ranked
        return self._rankings[user]

    def prefers(self, user: int, sbs: int, current: Optional[int]) -> bool:
        """True when the user strictly prefers sbs to its current match."""
        ranking = self.ranking(user)
        if sbs not in ranking:
            return False
        if current is None:
            return True
        return ranking.index(sbs) < ranking.index(current)

    def candidate_sets(self, sbs: int, users: Sequence[int]) -> Iterator[Members]:
        """
        Singletons, single-direction NOMA groups of size 2..q and FD pairs.
        Pools above the enumeration limit only try gain-sorted NOMA prefixes.
        """
        users = sorted(set(users))
        capable = {x: [u for u in users if self.weights[x][u] > 0] for x in (UL, DL)}
        for u in users:
            for x in self.directions(u):
                yield ((u, x),)

        quota = self.config.noma_quota
        gains = self.channel.h_bu[sbs]
        for x in (UL, DL):
            pool = capable[x]
            if len(users) > self.config.matching_enumeration_limit:
                ordered = sorted(pool, key=lambda u: (-gains[u], u))
                groups = (ordered[:k] for k in range(2, min(quota, len(ordered)) + 1))
            else:
                groups = (
                    combo for k in range(2, min(quota, len(pool)) + 1) for combo in itertools.combinations(pool, k)
                )
            for group in groups:
                yield tuple(sorted((u, x) for u in group))

        for u in capable[UL]:
            for v in capable[DL]:
                if u != v:
                    yield tuple(sorted(((u, UL), (v, DL))))

    def best_subset(
        self, sbs: int, users: Sequence[int], must_include: Optional[int] = None
    ) -> Tuple[Members, Optional[float]]:
        """
        Most valuable feasible non-empty candidate set drawn from users. Ties go
        to the smaller set, then to the lexicographically smaller one.
        """
        best: Members = ()
        best_key = None
        best_value: Optional[float] = None
        for members in self.candidate_sets(sbs, users):
            if must_include is not None and all(u != must_include for u, _ in members):
                continue
            value = self.value(sbs, members)
            if value is None:
                continue
            key = (-value, len(members), members)
            if best_key is None or key < best_key:
                best, best_key, best_value = members, key, value
        return best, best_value
