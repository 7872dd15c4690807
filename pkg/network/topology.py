"""
Network geometry and channel gains.

Node indexing in the gain table: SBS b is node b, user u is node B + u.
"""

import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple, Union

import numpy as np

from errors import TopologyError
from logger import log_debug
from network.config import ScenarioConfig
from network.consts import DEFAULT_PATHLOSS, LINK_KINDS, MIN_DISTANCE_M, SBS_SBS, SBS_USER, USER_USER
from network.rng import stream

ArrayLike = Union[float, np.ndarray]


def pathloss_db(
    kind: str,
    distance: ArrayLike,
    pathloss: Mapping[str, Tuple[float, float]] = DEFAULT_PATHLOSS,
    min_distance: float = MIN_DISTANCE_M,
) -> ArrayLike:
    """PL(dB) = intercept + slope * log10(d / 1 km), with d floored at min_distance."""
    if kind not in LINK_KINDS:
        raise ValueError(f"Unknown link kind '{kind}', expected one of {LINK_KINDS}")
    intercept, slope = pathloss[kind]
    d = np.maximum(np.asarray(distance, dtype=float), min_distance)
    return intercept + slope * np.log10(d / 1000.0)


def link_gain(
    kind: str,
    distance: ArrayLike,
    shadow_draw: ArrayLike = 0.0,
    pathloss: Mapping[str, Tuple[float, float]] = DEFAULT_PATHLOSS,
    min_distance: float = MIN_DISTANCE_M,
    penetration_loss_db: float = 0.0,
) -> ArrayLike:
    """Linear gain 10^(-(PL + shadow + penetration) / 10)."""
    loss = pathloss_db(kind, distance, pathloss, min_distance) + shadow_draw + penetration_loss_db
    gain = np.power(10.0, -np.asarray(loss) / 10.0)
    return float(gain) if np.ndim(gain) == 0 else gain


def draw_shadowing(rng: np.random.Generator, num_nodes: int, std_db: float) -> np.ndarray:
    """Symmetric log-normal shadowing table in dB with a zero diagonal."""
    upper = np.triu(rng.normal(0.0, std_db, size=(num_nodes, num_nodes)), k=1)
    return upper + upper.T


def _link_kinds(num_sbs: int, num_users: int) -> np.ndarray:
    n = num_sbs + num_users
    kinds = np.full((n, n), SBS_USER, dtype=object)
    kinds[:num_sbs, :num_sbs] = SBS_SBS
    kinds[num_sbs:, num_sbs:] = USER_USER
    return kinds


@dataclass(frozen=True)
class NetworkTopology:
    """
    Geometry and reciprocal link gains of one network.

    Attributes:
        sbs_positions: (B, 2) SBS coordinates
        user_positions: (U, 2) user coordinates
        home_sbs: (U,) index of the nearest SBS
        gains: (B+U, B+U) symmetric linear gains, zero on the diagonal
        coverage: (B, U) SBSs a user may associate with
    """

    sbs_positions: np.ndarray
    user_positions: np.ndarray
    home_sbs: np.ndarray
    gains: np.ndarray
    coverage: np.ndarray

    @property
    def num_sbs(self) -> int:
        return int(self.sbs_positions.shape[0])

    @property
    def num_users(self) -> int:
        return int(self.user_positions.shape[0])

    @property
    def h_bu(self) -> np.ndarray:
        return self.gains[: self.num_sbs, self.num_sbs :]

    @property
    def h_uu(self) -> np.ndarray:
        return self.gains[self.num_sbs :, self.num_sbs :]

    @property
    def h_bb(self) -> np.ndarray:
        return self.gains[: self.num_sbs, : self.num_sbs]

    def user_node(self, user: int) -> int:
        return self.num_sbs + user

    def home_users(self, sbs: int) -> np.ndarray:
        return np.flatnonzero(self.home_sbs == sbs)

    def covering_sbs(self, user: int) -> np.ndarray:
        return np.flatnonzero(self.coverage[:, user])

    def faded(self, rng: np.random.Generator) -> "NetworkTopology":
        """One subframe's channel: unit-mean exponential fading on every reciprocal link."""
        n = self.gains.shape[0]
        upper = np.triu(rng.exponential(1.0, size=(n, n)), k=1)
        return replace(self, gains=self.gains * (upper + upper.T))

    @classmethod
    def from_gain_blocks(
        cls,
        h_bu: np.ndarray,
        h_uu: Optional[np.ndarray] = None,
        h_bb: Optional[np.ndarray] = None,
        home_sbs: Optional[np.ndarray] = None,
        coverage: Optional[np.ndarray] = None,
    ) -> "NetworkTopology":
        """
        Build a topology from hand-set gains. Missing user-user and SBS-SBS
        blocks get a negligible 1e-30 gain; positions are placeholders.
        """
        h_bu = np.atleast_2d(np.asarray(h_bu, dtype=float))
        num_sbs, num_users = h_bu.shape
        h_uu = np.full((num_users, num_users), 1e-30) if h_uu is None else np.asarray(h_uu, dtype=float)
        h_bb = np.full((num_sbs, num_sbs), 1e-30) if h_bb is None else np.asarray(h_bb, dtype=float)
        gains = np.block([[h_bb, h_bu], [h_bu.T, h_uu]])
        gains = 0.5 * (gains + gains.T)
        np.fill_diagonal(gains, 0.0)
        if home_sbs is None:
            home_sbs = np.argmax(h_bu, axis=0) if num_users else np.zeros(0, dtype=int)
        if coverage is None:
            coverage = np.ones((num_sbs, num_users), dtype=bool)
        return cls(
            sbs_positions=np.zeros((num_sbs, 2)),
            user_positions=np.zeros((num_users, 2)),
            home_sbs=np.asarray(home_sbs, dtype=int),
            gains=gains,
            coverage=np.asarray(coverage, dtype=bool),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "sbs_positions": self.sbs_positions.tolist(),
            "user_positions": self.user_positions.tolist(),
            "home_sbs": self.home_sbs.tolist(),
            "gains": self.gains.tolist(),
            "coverage": self.coverage.tolist(),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "NetworkTopology":
        num_sbs = len(data["sbs_positions"])
        return cls(
            sbs_positions=np.asarray(data["sbs_positions"], dtype=float).reshape(num_sbs, 2),
            user_positions=np.asarray(data["user_positions"], dtype=float).reshape(-1, 2),
            home_sbs=np.asarray(data["home_sbs"], dtype=int),
            gains=np.asarray(data["gains"], dtype=float),
            coverage=np.asarray(data["coverage"], dtype=bool).reshape(num_sbs, -1),
        )

    def dump_json(self, path: Path) -> None:
        with open(path, "w") as f:
            json.dump(self.to_dict(), f)

    @classmethod
    def load_json(cls, path: Path) -> "NetworkTopology":
        with open(path, "r") as f:
            return cls.from_dict(json.load(f))


def _place_sbs(config: ScenarioConfig, rng: np.random.Generator) -> np.ndarray:
    if config.sbs_positions is not None:
        return np.asarray(config.sbs_positions, dtype=float).reshape(config.num_sbs, 2)
    if config.area_side < 2 * config.cell_radius:
        raise TopologyError(
            f"Area side {config.area_side} m cannot hold a cell of radius {config.cell_radius} m"
        )
    # Cells stay inside the area.
    low, high = config.cell_radius, config.area_side - config.cell_radius
    return rng.uniform(low, high, size=(config.num_sbs, 2))


def generate_topology(config: ScenarioConfig, seed: Optional[int] = None) -> NetworkTopology:
    """
    Drop SBSs uniformly over the area and users uniformly inside a uniformly
    chosen cell disc, then build the shadowed gain table. Pure in (config, seed).
    """
    if config.num_sbs == 0:
        raise TopologyError("A network needs at least one SBS")

    seed = config.rng_seed if seed is None else seed
    rng = stream(seed, "topology")

    sbs_positions = _place_sbs(config, rng)
    num_sbs = config.num_sbs
    if config.num_users is not None:
        num_users = config.num_users
    else:
        num_users = int(rng.poisson(num_sbs * config.mean_users_per_sbs))

    cells = rng.integers(0, num_sbs, size=num_users)
    radii = config.cell_radius * np.sqrt(rng.random(num_users))
    angles = rng.uniform(0.0, 2 * np.pi, size=num_users)
    offsets = np.column_stack((radii * np.cos(angles), radii * np.sin(angles)))
    user_positions = sbs_positions[cells] + offsets

    nodes = np.vstack((sbs_positions, user_positions))
    distances = np.linalg.norm(nodes[:, None, :] - nodes[None, :, :], axis=-1)
    to_sbs = distances[:num_sbs, num_sbs:]
    home_sbs = np.argmin(to_sbs, axis=0) if num_users else np.zeros(0, dtype=int)

    shadow = draw_shadowing(rng, num_sbs + num_users, config.shadowing_std_db)
    kinds = _link_kinds(num_sbs, num_users)
    gains = np.zeros_like(distances)
    for kind in LINK_KINDS:
        mask = kinds == kind
        gains[mask] = link_gain(
            kind,
            distances[mask],
            shadow[mask],
            pathloss=config.pathloss,
            min_distance=config.min_distance,
            penetration_loss_db=config.penetration_loss_db,
        )
    np.fill_diagonal(gains, 0.0)

    coverage = to_sbs <= config.coverage_radius
    if num_users:
        coverage[home_sbs, np.arange(num_users)] = True

    log_debug(f"Topology seed={seed}: {num_sbs} SBSs, {num_users} users")
    return NetworkTopology(
        sbs_positions=sbs_positions,
        user_positions=user_positions,
        home_sbs=home_sbs,
        gains=gains,
        coverage=coverage,
    )
