"""
SINRs, interference terms, NOMA decoding order and SIC margins.

Every function is pure over (assignment, powers, channel). A user u' is
stronger than u at SBS b when h_bu' > h_bu, with ties going to the lower
user index.
"""

from dataclasses import dataclass
from typing import TYPE_CHECKING, Dict, Iterable, List, Mapping, Tuple

import numpy as np

from errors import AssignmentError
from network.consts import DL, UL
from network.topology import NetworkTopology
from phy.assignment import CellSchedule, LinkAssignment, PowerAllocation

if TYPE_CHECKING:
    from matching.learning import LearnedInterference


@dataclass(frozen=True)
class InterferenceBreakdown:
    """Interference and noise powers (watts) seen by one receiver."""

    ul_ul: float = 0.0
    dl_ul: float = 0.0
    dl_dl: float = 0.0
    ul_dl: float = 0.0
    # Part of ul_dl coming from UL users of the serving cell (full duplex).
    ul_dl_intra: float = 0.0
    noma_ul: float = 0.0
    noma_dl: float = 0.0
    self_interference: float = 0.0
    noise: float = 0.0

    @property
    def inter_cell(self) -> float:
        return self.ul_ul + self.dl_ul + self.dl_dl + self.ul_dl - self.ul_dl_intra

    @property
    def intra_cell(self) -> float:
        return self.noma_ul + self.noma_dl + self.ul_dl_intra + self.self_interference

    @property
    def denominator(self) -> float:
        return self.noise + self.inter_cell + self.intra_cell


@dataclass(frozen=True)
class SinrResult:
    sinr: float
    signal: float
    breakdown: InterferenceBreakdown


def is_stronger(gains: np.ndarray, other: int, user: int) -> bool:
    return gains[other] > gains[user] or (gains[other] == gains[user] and other < user)


def noma_decode_order(users: Iterable[int], gains: np.ndarray, direction: str) -> List[int]:
    """
    Strongest-first ranking of co-scheduled users at one SBS.

    DL: each user cancels the users ranked after it, so NOMA interference at u
    comes from users ranked before it. UL: the SBS decodes in this order, so u
    is interfered by users ranked after it.
    """
    if direction not in (UL, DL):
        raise ValueError(f"Unknown direction '{direction}'")
    return sorted(users, key=lambda u: (-gains[u], u))


def service_rate(sinr: float, bandwidth: float) -> float:
    """Shannon rate f_b log2(1 + SINR) in bits per second."""
    return bandwidth * np.log2(1.0 + sinr)


def subframe_bits(sinr: np.ndarray, rate_scale: float, r_max: float) -> np.ndarray:
    """Bits one subframe carries at the given SINRs, capped at r_max."""
    return np.minimum(rate_scale * np.log2(1.0 + np.asarray(sinr, dtype=float)), r_max)


def _intra_cell_terms(
    channel: NetworkTopology,
    sbs: int,
    cell: CellSchedule,
    p_ul: np.ndarray,
    p_dl_row: np.ndarray,
    zeta: float,
    direction: str,
    user: int,
) -> Dict[str, float]:
    h_b = channel.h_bu[sbs]
    if direction == UL:
        weaker = [v for v in cell.ul if v != user and not is_stronger(h_b, v, user)]
        return {
            "noma_ul": float(sum(p_ul[v] * h_b[v] for v in weaker)),
            "self_interference": float(p_dl_row.sum() / zeta),
        }
    stronger = [v for v in cell.dl if v != user and is_stronger(h_b, v, user)]
    return {
        "noma_dl": float(sum(p_dl_row[v] for v in stronger) * h_b[user]),
        "ul_dl_intra": float(sum(p_ul[v] * channel.h_uu[v, user] for v in cell.ul if v != user)),
    }


def _check_served(assignment: LinkAssignment, direction: str, sbs: int, user: int) -> CellSchedule:
    cell = assignment.cells[sbs]
    served = cell.ul if direction == UL else cell.dl
    if user not in served:
        raise AssignmentError(f"User {user} is not served by SBS {sbs} in {direction}")
    return cell


def compute_sinr(
    assignment: LinkAssignment,
    powers: PowerAllocation,
    channel: NetworkTopology,
    direction: str,
    sbs: int,
    user: int,
    zeta: float,
    noise: float,
) -> SinrResult:
    """Exact SINR of one scheduled link with its full interference breakdown."""
    cell = _check_served(assignment, direction, sbs, user)
    p_b = powers.sbs_dl_power
    other_sbs = np.arange(assignment.num_sbs) != sbs
    intra = _intra_cell_terms(channel, sbs, cell, powers.p_ul, powers.p_dl[sbs], zeta, direction, user)

    if direction == UL:
        outside = powers.p_ul.copy()
        outside[list(cell.ul)] = 0.0
        breakdown = InterferenceBreakdown(
            ul_ul=float(outside @ channel.h_bu[sbs]),
            dl_ul=float(p_b[other_sbs] @ channel.h_bb[other_sbs, sbs]),
            noise=noise,
            **intra,
        )
        signal = powers.p_ul[user] * channel.h_bu[sbs, user]
    else:
        others = powers.p_ul.copy()
        others[user] = 0.0
        breakdown = InterferenceBreakdown(
            dl_dl=float(p_b[other_sbs] @ channel.h_bu[other_sbs, user]),
            ul_dl=float(others @ channel.h_uu[:, user]),
            noise=noise,
            **intra,
        )
        signal = powers.p_dl[sbs, user] * channel.h_bu[sbs, user]

    return SinrResult(sinr=float(signal / breakdown.denominator), signal=float(signal), breakdown=breakdown)


def estimated_cell_sinrs(
    channel: NetworkTopology,
    sbs: int,
    cell: CellSchedule,
    p_ul: np.ndarray,
    p_dl_row: np.ndarray,
    i_hat: float,
    j_hat: np.ndarray,
    zeta: float,
    noise: float,
) -> Dict[Tuple[int, str], float]:
    """
    SINR of every member of one candidate cell, with inter-cell interference
    replaced by the learned estimates and intra-cell terms computed exactly.
    """
    h_b = channel.h_bu[sbs]
    out: Dict[Tuple[int, str], float] = {}
    for direction, users in ((UL, cell.ul), (DL, cell.dl)):
        for u in users:
            intra = _intra_cell_terms(channel, sbs, cell, p_ul, p_dl_row, zeta, direction, u)
            inter = i_hat if direction == UL else j_hat[u]
            signal = (p_ul[u] if direction == UL else p_dl_row[u]) * h_b[u]
            out[(u, direction)] = float(signal / (noise + inter + sum(intra.values())))
    return out


def estimated_sinr(
    assignment: LinkAssignment,
    powers: PowerAllocation,
    channel: NetworkTopology,
    learned: "LearnedInterference",
    sbs: int,
    user: int,
    direction: str,
    zeta: float,
    noise: float,
) -> float:
    cell = _check_served(assignment, direction, sbs, user)
    sinrs = estimated_cell_sinrs(
        channel, sbs, cell, powers.p_ul, powers.p_dl[sbs], learned.i_hat[sbs], learned.j_hat, zeta, noise
    )
    return sinrs[(user, direction)]


def cell_sic_margins(
    channel: NetworkTopology,
    sbs: int,
    cell: CellSchedule,
    p_dl_row: np.ndarray,
    external: Mapping[int, float],
    noise: float,
) -> Dict[Tuple[int, int], float]:
    """
    Y_uu' = SINR at which u' decodes u's message minus u's own SINR, for each
    DL pair where u' is stronger. external[u] is the interference u receives
    from outside its cell's DL NOMA group.
    """
    h_b = channel.h_bu[sbs]
    margins: Dict[Tuple[int, int], float] = {}
    for u in cell.dl:
        stronger_than_u = [v for v in cell.dl if v != u and is_stronger(h_b, v, u)]
        own = p_dl_row[u] * h_b[u] / (noise + external[u] + sum(p_dl_row[v] for v in stronger_than_u) * h_b[u])
        for v in stronger_than_u:
            stronger_than_v = [w for w in cell.dl if w != v and is_stronger(h_b, w, v)]
            noma_v = sum(p_dl_row[w] for w in stronger_than_v) * h_b[v]
            decode = p_dl_row[u] * h_b[v] / (p_dl_row[v] * h_b[v] + noise + external[v] + noma_v)
            margins[(u, v)] = float(decode - own)
    return margins


def sic_feasibility(
    assignment: LinkAssignment,
    powers: PowerAllocation,
    channel: NetworkTopology,
    sbs: int,
    zeta: float,
    noise: float,
) -> Tuple[bool, Dict[Tuple[int, int], float]]:
    """Exact SIC margins of one SBS; feasible when every margin is non-negative."""
    cell = assignment.cells[sbs]
    external = {}
    for u in cell.dl:
        b = compute_sinr(assignment, powers, channel, DL, sbs, u, zeta, noise).breakdown
        external[u] = b.dl_dl + b.ul_dl
    margins = cell_sic_margins(channel, sbs, cell, powers.p_dl[sbs], external, noise)
    return all(m >= 0 for m in margins.values()), margins


@dataclass(frozen=True)
class LinkEvaluation:
    """
    Realized SINRs of one subframe.

    Attributes:
        sinr_ul, sinr_dl: (U,) zero for users not served in that direction
        measured_sbs: (B,) inter-cell interference at each UL receiver, NaN when not receiving
        measured_user: (U,) inter-cell interference at each DL receiver, NaN when not receiving
        breakdowns: per (user, direction) interference terms
    """

    sinr_ul: np.ndarray
    sinr_dl: np.ndarray
    measured_sbs: np.ndarray
    measured_user: np.ndarray
    breakdowns: Dict[Tuple[int, str], InterferenceBreakdown]


def evaluate_links(
    assignment: LinkAssignment,
    powers: PowerAllocation,
    channel: NetworkTopology,
    zeta: float,
    noise: float,
) -> LinkEvaluation:
    num_users = channel.num_users
    sinr = {UL: np.zeros(num_users), DL: np.zeros(num_users)}
    measured_sbs = np.full(assignment.num_sbs, np.nan)
    measured_user = np.full(num_users, np.nan)
    breakdowns: Dict[Tuple[int, str], InterferenceBreakdown] = {}

    for direction, links in ((UL, assignment.ul_links()), (DL, assignment.dl_links())):
        for b, u in links:
            result = compute_sinr(assignment, powers, channel, direction, b, u, zeta, noise)
            sinr[direction][u] = result.sinr
            breakdowns[(u, direction)] = result.breakdown
            if direction == UL:
                measured_sbs[b] = result.breakdown.inter_cell
            else:
                measured_user[u] = result.breakdown.inter_cell

    return LinkEvaluation(
        sinr_ul=sinr[UL],
        sinr_dl=sinr[DL],
        measured_sbs=measured_sbs,
        measured_user=measured_user,
        breakdowns=breakdowns,
    )
