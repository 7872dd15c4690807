"""Link assignments and transmit powers for one subframe."""

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from errors import AssignmentError
from network.consts import (
    DL,
    FD_OMA,
    HD_NOMA_DL,
    HD_NOMA_UL,
    HD_OMA_DL,
    HD_OMA_UL,
    IDLE,
    UL,
)


def mode_for(ul: Sequence[int], dl: Sequence[int]) -> str:
    if ul and dl:
        return FD_OMA
    if ul:
        return HD_OMA_UL if len(ul) == 1 else HD_NOMA_UL
    if dl:
        return HD_OMA_DL if len(dl) == 1 else HD_NOMA_DL
    return IDLE


@dataclass(frozen=True)
class CellSchedule:
    """Users one SBS serves this subframe, per direction."""

    ul: Tuple[int, ...] = ()
    dl: Tuple[int, ...] = ()

    @property
    def mode(self) -> str:
        return mode_for(self.ul, self.dl)

    @property
    def members(self) -> Tuple[Tuple[int, str], ...]:
        return tuple(sorted([(u, UL) for u in self.ul] + [(u, DL) for u in self.dl]))

    @classmethod
    def from_members(cls, members: Iterable[Tuple[int, str]]) -> "CellSchedule":
        members = list(members)
        return cls(
            ul=tuple(sorted(u for u, x in members if x == UL)),
            dl=tuple(sorted(u for u, x in members if x == DL)),
        )


@dataclass(frozen=True)
class LinkAssignment:
    """Per-SBS served sets; x_bu^UL / x_bu^DL are exposed through indicators()."""

    cells: Tuple[CellSchedule, ...]

    @classmethod
    def idle(cls, num_sbs: int) -> "LinkAssignment":
        return cls(cells=tuple(CellSchedule() for _ in range(num_sbs)))

    @classmethod
    def from_sets(
        cls, ul_sets: Sequence[Iterable[int]], dl_sets: Sequence[Iterable[int]]
    ) -> "LinkAssignment":
        return cls(
            cells=tuple(
                CellSchedule(ul=tuple(sorted(ul)), dl=tuple(sorted(dl)))
                for ul, dl in zip(ul_sets, dl_sets)
            )
        )

    @property
    def num_sbs(self) -> int:
        return len(self.cells)

    @property
    def modes(self) -> Tuple[str, ...]:
        return tuple(cell.mode for cell in self.cells)

    def ul_links(self) -> List[Tuple[int, int]]:
        return [(b, u) for b, cell in enumerate(self.cells) for u in cell.ul]

    def dl_links(self) -> List[Tuple[int, int]]:
        return [(b, u) for b, cell in enumerate(self.cells) for u in cell.dl]

    def serving(self, user: int) -> Optional[Tuple[int, str]]:
        for b, cell in enumerate(self.cells):
            if user in cell.ul:
                return b, UL
            if user in cell.dl:
                return b, DL
        return None

    def indicators(self, num_users: int) -> Tuple[np.ndarray, np.ndarray]:
        x_ul = np.zeros((self.num_sbs, num_users), dtype=bool)
        x_dl = np.zeros((self.num_sbs, num_users), dtype=bool)
        for b, u in self.ul_links():
            x_ul[b, u] = True
        for b, u in self.dl_links():
            x_dl[b, u] = True
        return x_ul, x_dl

    def validate(self, num_users: int, quota: int) -> None:
        """Raise AssignmentError unless the single-SBS, FD/NOMA and quota rules hold."""
        seen: Dict[int, int] = {}
        for b, cell in enumerate(self.cells):
            for u in cell.ul + cell.dl:
                if not 0 <= u < num_users:
                    raise AssignmentError(f"SBS {b} serves unknown user {u}")
                if u in seen:
                    raise AssignmentError(f"User {u} served twice (SBS {seen[u]} and SBS {b})")
                seen[u] = b
            if cell.ul and cell.dl and (len(cell.ul) != 1 or len(cell.dl) != 1):
                raise AssignmentError(f"SBS {b} mixes full duplex with NOMA")
            if len(cell.ul) > quota or len(cell.dl) > quota:
                raise AssignmentError(f"SBS {b} exceeds the NOMA quota of {quota}")


@dataclass(frozen=True)
class PowerAllocation:
    """
    Transmit powers in watts.

    Attributes:
        p_ul: (U,) UL power of each user, zero when not transmitting
        p_dl: (B, U) DL power SBS b spends on user u
    """

    p_ul: np.ndarray
    p_dl: np.ndarray

    @classmethod
    def zeros(cls, num_sbs: int, num_users: int) -> "PowerAllocation":
        return cls(p_ul=np.zeros(num_users), p_dl=np.zeros((num_sbs, num_users)))

    @property
    def sbs_dl_power(self) -> np.ndarray:
        """p_b^DL, the total DL power of each SBS."""
        return self.p_dl.sum(axis=1)

    def is_feasible(
        self, assignment: LinkAssignment, p_max_ul: float, p_max_dl: float, tol: float = 1e-12
    ) -> bool:
        x_ul, x_dl = assignment.indicators(self.p_ul.shape[0])
        if np.any(self.p_ul < -tol) or np.any(self.p_dl < -tol):
            return False
        if np.any(self.p_ul[~x_ul.any(axis=0)] > tol) or np.any(self.p_dl[~x_dl] > tol):
            return False
        if np.any(self.p_ul > p_max_ul * (1 + tol)):
            return False
        return bool(np.all(self.sbs_dl_power <= p_max_dl * (1 + tol)))
