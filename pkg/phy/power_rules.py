"""Fixed per-cell power rules used outside the power optimiser."""

from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from network.config import ScenarioConfig
from network.consts import DL, UL
from network.topology import NetworkTopology
from phy.assignment import CellSchedule, LinkAssignment, PowerAllocation
from phy.sinr import noma_decode_order

CellPowers = Tuple[Dict[int, float], Dict[int, float]]
PowerRule = Callable[[NetworkTopology, int, CellSchedule], CellPowers]


def noma_rank_fractions(users: Sequence[int], gains: np.ndarray, direction: str) -> Dict[int, float]:
    """
    Rank weights (k, k-1, ..., 1) / sum over k co-scheduled users. UL gives the
    largest share to the strongest user, DL to the weakest.
    """
    order: List[int] = noma_decode_order(users, gains, direction)
    if direction == DL:
        order = order[::-1]
    k = len(order)
    total = k * (k + 1) / 2
    return {u: (k - rank) / total for rank, u in enumerate(order)}


def average_power_rule(config: ScenarioConfig) -> PowerRule:
    """UL users at delta_ul; the SBS splits delta_dl equally over its DL users."""

    def rule(channel: NetworkTopology, sbs: int, cell: CellSchedule) -> CellPowers:
        p_ul = {u: config.delta_ul for u in cell.ul}
        p_dl = {u: config.delta_dl / len(cell.dl) for u in cell.dl}
        return p_ul, p_dl

    return rule


def baseline_power_rule(config: ScenarioConfig) -> PowerRule:
    """Full power for single links, rank-weighted shares of the budget for NOMA groups."""

    def rule(channel: NetworkTopology, sbs: int, cell: CellSchedule) -> CellPowers:
        gains = channel.h_bu[sbs]
        p_ul = {u: config.p_max_ul * f for u, f in noma_rank_fractions(cell.ul, gains, UL).items()}
        p_dl = {u: config.p_max_dl * f for u, f in noma_rank_fractions(cell.dl, gains, DL).items()}
        return p_ul, p_dl

    return rule


def allocation_from_rule(
    assignment: LinkAssignment, channel: NetworkTopology, rule: PowerRule
) -> PowerAllocation:
    powers = PowerAllocation.zeros(assignment.num_sbs, channel.num_users)
    for b, cell in enumerate(assignment.cells):
        p_ul, p_dl = rule(channel, b, cell)
        for u, p in p_ul.items():
            powers.p_ul[u] = p
        for u, p in p_dl.items():
            powers.p_dl[b, u] = p
    return powers
