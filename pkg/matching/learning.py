"""Exponentially weighted estimates of inter-cell interference."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class LearnedInterference:
    """
    Attributes:
        i_hat: (B,) estimated inter-cell interference at each SBS receiver (watts)
        j_hat: (U,) estimated inter-cell interference at each user receiver (watts)
    """

    i_hat: np.ndarray
    j_hat: np.ndarray

    @classmethod
    def zeros(cls, num_sbs: int, num_users: int) -> "LearnedInterference":
        return cls(i_hat=np.zeros(num_sbs), j_hat=np.zeros(num_users))


def ewma(previous: np.ndarray, measured: np.ndarray, rate: float) -> np.ndarray:
    """rate * measured + (1 - rate) * previous; NaN measurements keep the previous value."""
    measured = np.asarray(measured, dtype=float)
    updated = rate * measured + (1.0 - rate) * previous
    return np.where(np.isnan(measured), previous, updated)


def update_learning(
    prev: LearnedInterference,
    measured_sbs: np.ndarray,
    measured_user: np.ndarray,
    nu1: float,
    nu2: float,
) -> LearnedInterference:
    return LearnedInterference(
        i_hat=ewma(prev.i_hat, measured_sbs, nu1),
        j_hat=ewma(prev.j_hat, measured_user, nu2),
    )
