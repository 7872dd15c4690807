"""Poisson packet arrivals with exponential packet sizes."""

from dataclasses import dataclass, field
from typing import List

import numpy as np

from network.config import ScenarioConfig
from network.consts import DL, UL


@dataclass(frozen=True)
class ArrivalProcess:
    """
    Per-user traffic source of one link direction.

    Attributes:
        rate: packets per second
        mean_size: mean packet size in bits
        a_max: cap on the bits arriving at one user in one subframe
        subframe_duration: seconds
    """

    rate: float
    mean_size: float
    a_max: int
    subframe_duration: float

    def __post_init__(self) -> None:
        if self.rate < 0:
            raise ValueError(f"Arrival rate must be non-negative, got {self.rate}")
        if self.mean_size <= 0:
            raise ValueError(f"Mean packet size must be positive, got {self.mean_size}")
        if self.a_max < 1:
            raise ValueError(f"Arrival cap must be at least one bit, got {self.a_max}")

    @property
    def packets_per_subframe(self) -> float:
        return self.rate * self.subframe_duration

    @property
    def mean_bits_per_second(self) -> float:
        return self.rate * self.mean_size

    @classmethod
    def from_config(cls, config: ScenarioConfig, direction: str) -> "ArrivalProcess":
        rate = {UL: config.lambda_ul, DL: config.lambda_dl}[direction]
        return cls(
            rate=rate,
            mean_size=config.mean_packet_size,
            a_max=config.a_max,
            subframe_duration=config.subframe_duration,
        )


@dataclass
class ArrivalBatch:
    """Bits per user for one subframe, plus the individual packet sizes behind them."""

    bits: np.ndarray
    packets: List[np.ndarray] = field(default_factory=list)

    @property
    def num_packets(self) -> int:
        return int(sum(len(p) for p in self.packets))


def draw_arrivals(proc: ArrivalProcess, rng: np.random.Generator, num_users: int) -> ArrivalBatch:
    """
    Draw one subframe of arrivals for every user. Packet sizes are whole bits;
    the packet crossing a_max is shortened and later packets are dropped, so
    each user's total never exceeds a_max.
    """
    if proc.rate > 0:
        counts = rng.poisson(proc.packets_per_subframe, size=num_users)
    else:
        counts = np.zeros(num_users, dtype=np.int64)
    total = int(counts.sum())
    if total == 0:
        return ArrivalBatch(
            bits=np.zeros(num_users, dtype=np.int64),
            packets=[np.zeros(0, dtype=np.int64) for _ in range(num_users)],
        )

    sizes = np.maximum(np.ceil(rng.exponential(proc.mean_size, size=total)), 1).astype(np.int64)
    owners = np.repeat(np.arange(num_users), counts)
    first = np.repeat(np.concatenate(([0], np.cumsum(counts)[:-1])), counts)

    # Bits already queued by earlier packets of the same user this subframe.
    cumulative = np.cumsum(sizes)
    before = cumulative - sizes - (cumulative[first] - sizes[first])
    room = proc.a_max - before
    sizes = np.where(room > 0, np.minimum(sizes, room), 0)

    bits = np.bincount(owners, weights=sizes, minlength=num_users).astype(np.int64)
    packets = [s[s > 0] for s in np.split(sizes, np.cumsum(counts)[:-1])]
    return ArrivalBatch(bits=bits, packets=packets)
