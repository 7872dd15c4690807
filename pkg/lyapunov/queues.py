"""
Traffic queues and the virtual queues of the drift-plus-penalty scheduler.

Traffic queues hold whole bits (int64), so conservation checks are exact.
Auxiliary queues H are in bits, power queues Z in watt-subframes.
"""

from dataclasses import dataclass, replace
from typing import Union

import numpy as np

from network.config import ScenarioConfig
from network.consts import DL, UL

Number = Union[int, float, np.ndarray]


def update_traffic_queue(q: Number, served: Number, arrival: Number) -> Number:
    """Q' = max(Q - r, 0) + a."""
    return np.maximum(q - served, 0) + arrival


def select_auxiliary(h: Number, v: float, r_max: float) -> Number:
    """The auxiliary rate is r_max while H <= v, otherwise 0."""
    if np.ndim(h):
        return np.where(np.asarray(h) <= v, r_max, 0.0)
    return r_max if h <= v else 0.0


def drift_constant(
    a_max_ul: float,
    a_max_dl: float,
    p_max_ul: float,
    p_max_dl: float,
    r_max_ul: float,
    r_max_dl: float,
    num_users: int,
    num_sbs: int,
) -> float:
    """C = 1/2 * sum_u [A_ul^2 + A_dl^2 + 2 P_ul^2 + 3 r_ul^2 + 3 r_dl^2] + sum_b 2 P_dl^2."""
    per_user = a_max_ul**2 + a_max_dl**2 + 2 * p_max_ul**2 + 3 * r_max_ul**2 + 3 * r_max_dl**2
    return 0.5 * num_users * per_user + num_sbs * 2 * p_max_dl**2


def drift_bound_constant(config: ScenarioConfig, num_users: int) -> float:
    """Drift bound constant for a network of num_users users under config."""
    return drift_constant(
        a_max_ul=config.a_max,
        a_max_dl=config.a_max,
        p_max_ul=config.p_max_ul,
        p_max_dl=config.p_max_dl,
        r_max_ul=config.r_max,
        r_max_dl=config.r_max,
        num_users=num_users,
        num_sbs=config.num_sbs,
    )


@dataclass(frozen=True)
class QueueState:
    """
    All queues of one network at the start of a subframe.

    Attributes:
        q_ul, q_dl: (U,) traffic backlog in bits
        h_ul, h_dl: (U,) auxiliary virtual queues in bits
        z_ul: (U,) UL power virtual queues
        z_dl: (B,) DL power virtual queues
        gamma_ul, gamma_dl: (U,) auxiliary rates chosen this subframe
    """

    q_ul: np.ndarray
    q_dl: np.ndarray
    h_ul: np.ndarray
    h_dl: np.ndarray
    z_ul: np.ndarray
    z_dl: np.ndarray
    gamma_ul: np.ndarray
    gamma_dl: np.ndarray

    @classmethod
    def zeros(cls, num_users: int, num_sbs: int) -> "QueueState":
        return cls(
            q_ul=np.zeros(num_users, dtype=np.int64),
            q_dl=np.zeros(num_users, dtype=np.int64),
            h_ul=np.zeros(num_users),
            h_dl=np.zeros(num_users),
            z_ul=np.zeros(num_users),
            z_dl=np.zeros(num_sbs),
            gamma_ul=np.zeros(num_users),
            gamma_dl=np.zeros(num_users),
        )

    @property
    def num_users(self) -> int:
        return int(self.q_ul.shape[0])

    def backlog(self, direction: str) -> np.ndarray:
        return self.q_ul if direction == UL else self.q_dl

    def weights(self, direction: str) -> np.ndarray:
        """w = Q + H for users with queued bits in that direction, else 0."""
        q = self.backlog(direction)
        h = self.h_ul if direction == UL else self.h_dl
        return np.where(q > 0, q + h, 0.0)


def select_auxiliaries(state: QueueState, v: float, r_max: float) -> QueueState:
    return replace(
        state,
        gamma_ul=select_auxiliary(state.h_ul, v, r_max),
        gamma_dl=select_auxiliary(state.h_dl, v, r_max),
    )


def serve_traffic(
    state: QueueState,
    served_ul: np.ndarray,
    served_dl: np.ndarray,
    arrivals_ul: np.ndarray,
    arrivals_dl: np.ndarray,
) -> QueueState:
    return replace(
        state,
        q_ul=update_traffic_queue(state.q_ul, served_ul, arrivals_ul).astype(np.int64),
        q_dl=update_traffic_queue(state.q_dl, served_dl, arrivals_dl).astype(np.int64),
    )


def update_virtual_queues(
    state: QueueState,
    served_ul: np.ndarray,
    served_dl: np.ndarray,
    p_ul: np.ndarray,
    p_dl_sbs: np.ndarray,
    delta_ul: float,
    delta_dl: float,
) -> QueueState:
    """
    H <- max(H - r, 0) + gamma, Z_u <- max(Z_u - delta_ul, 0) + p_u and
    Z_b <- max(Z_b - delta_dl, 0) + p_b, with p_b the SBS's summed DL power.
    """
    return replace(
        state,
        h_ul=np.maximum(state.h_ul - served_ul, 0.0) + state.gamma_ul,
        h_dl=np.maximum(state.h_dl - served_dl, 0.0) + state.gamma_dl,
        z_ul=np.maximum(state.z_ul - delta_ul, 0.0) + p_ul,
        z_dl=np.maximum(state.z_dl - delta_dl, 0.0) + p_dl_sbs,
    )


def served_bits(rate_bits: np.ndarray, backlog: np.ndarray) -> np.ndarray:
    """Whole bits a subframe can carry, never more than what is queued."""
    return np.minimum(np.floor(rate_bits).astype(np.int64), backlog)
