"""
Power control for a fixed link assignment, as a difference of concave functions.

Powers are normalized by their budgets, x = p / P_max, so every variable lives
in [0, 1]. Received power at every scheduled receiver is affine in x:

    N0 * (1 + total[k] @ x)         signal + interference + noise
    N0 * (1 + interference[k] @ x)  interference + noise

so the weighted sum rate splits into a concave part F (log of the total) and a
convex part G (minus log of the interference), and the power-queue terms form
an affine part Omega.
"""

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from errors import InfeasiblePowerError
from lyapunov.queues import QueueState
from network.config import ScenarioConfig
from network.consts import DL, UL
from network.topology import NetworkTopology
from phy.assignment import LinkAssignment, PowerAllocation
from phy.sinr import is_stronger

LN2 = np.log(2.0)


@dataclass(frozen=True)
class PowerVariable:
    direction: str
    sbs: int
    user: int


@dataclass(frozen=True)
class DcSplit:
    concave: float
    convex: float
    affine: float

    @property
    def total(self) -> float:
        return self.concave + self.convex + self.affine


@dataclass(frozen=True)
class PowerProblem:
    """
    Attributes:
        variables: one per scheduled link, UL links first
        budgets: (n,) watts per unit of each normalized variable
        total: (n, n) noise-normalized gains of signal plus interference at each link
        interference: (n, n) noise-normalized interference gains at each link
        noise: N0 in watts
        link_weights: (n,) queue weight times bits per unit of spectral efficiency
        prices: (n,) power-queue price per unit of each variable
        omega_constant: power-queue terms at zero power
        constraints, bounds: feasible set {x : constraints @ x <= bounds}
    """

    variables: Tuple[PowerVariable, ...]
    budgets: np.ndarray
    total: np.ndarray
    interference: np.ndarray
    noise: float
    link_weights: np.ndarray
    prices: np.ndarray
    omega_constant: float
    constraints: np.ndarray
    bounds: np.ndarray

    @property
    def size(self) -> int:
        return len(self.variables)

    @property
    def objective_scale(self) -> float:
        """Magnitude used to keep barrier parameters comparable across subframes."""
        return float(np.abs(self.link_weights).sum() + np.abs(self.prices).sum()) or 1.0

    def concave_part(self, x: np.ndarray) -> float:
        return float(self.link_weights @ (np.log2(self.noise) + np.log2(1.0 + self.total @ x)))

    def convex_part(self, x: np.ndarray) -> float:
        return float(-self.link_weights @ (np.log2(self.noise) + np.log2(1.0 + self.interference @ x)))

    def affine_part(self, x: np.ndarray) -> float:
        return float(self.omega_constant - self.prices @ x)

    def dc_split(self, x: np.ndarray) -> DcSplit:
        return DcSplit(concave=self.concave_part(x), convex=self.convex_part(x), affine=self.affine_part(x))

    def objective(self, x: np.ndarray) -> float:
        """Weighted sum rate (bits) plus power-queue terms; equals F + G + Omega."""
        rates = np.log2(1.0 + self.total @ x) - np.log2(1.0 + self.interference @ x)
        return float(self.link_weights @ rates) + self.affine_part(x)

    def concave_gradient(self, x: np.ndarray) -> np.ndarray:
        coef = self.link_weights / (LN2 * (1.0 + self.total @ x))
        return self.total.T @ coef

    def concave_hessian(self, x: np.ndarray) -> np.ndarray:
        coef = self.link_weights / (LN2 * (1.0 + self.total @ x) ** 2)
        return -(self.total.T * coef) @ self.total

    def convex_gradient(self, x: np.ndarray) -> np.ndarray:
        coef = self.link_weights / (LN2 * (1.0 + self.interference @ x))
        return -self.interference.T @ coef

    def convex_hessian(self, x: np.ndarray) -> np.ndarray:
        coef = self.link_weights / (LN2 * (1.0 + self.interference @ x) ** 2)
        return (self.interference.T * coef) @ self.interference

    def linearize_convex(self, x_ref: np.ndarray) -> "TangentPlane":
        return TangentPlane(
            x_ref=x_ref.copy(), value=self.convex_part(x_ref), gradient=self.convex_gradient(x_ref)
        )

    def slack(self, x: np.ndarray) -> np.ndarray:
        return self.bounds - self.constraints @ x

    def is_strictly_feasible(self, x: np.ndarray) -> bool:
        return bool(np.all(self.slack(x) > 0))

    def to_variables(self, powers: PowerAllocation) -> np.ndarray:
        x = np.zeros(self.size)
        for j, var in enumerate(self.variables):
            p = powers.p_ul[var.user] if var.direction == UL else powers.p_dl[var.sbs, var.user]
            x[j] = p / self.budgets[j]
        return x

    def to_allocation(self, x: np.ndarray, num_sbs: int, num_users: int) -> PowerAllocation:
        powers = PowerAllocation.zeros(num_sbs, num_users)
        for j, var in enumerate(self.variables):
            p = max(float(x[j]), 0.0) * self.budgets[j]
            if var.direction == UL:
                powers.p_ul[var.user] = p
            else:
                powers.p_dl[var.sbs, var.user] = p
        return powers


@dataclass(frozen=True)
class TangentPlane:
    """First-order expansion of the convex part around x_ref; never above it."""

    x_ref: np.ndarray
    value: float
    gradient: np.ndarray

    def __call__(self, x: np.ndarray) -> float:
        return float(self.value + self.gradient @ (x - self.x_ref))


def _received_gain(
    channel: NetworkTopology,
    zeta: float,
    receiver: PowerVariable,
    source: PowerVariable,
) -> float:
    """Gain from one transmitter's power to one receiver, zero when SIC removes it."""
    b, u = receiver.sbs, receiver.user
    h_b = channel.h_bu[b]
    if receiver.direction == UL:
        if source.direction == UL:
            if source.sbs != b:
                return float(channel.h_bu[b, source.user])
            return 0.0 if is_stronger(h_b, source.user, u) else float(h_b[source.user])
        return float(channel.h_bb[source.sbs, b]) if source.sbs != b else 1.0 / zeta
    if source.direction == UL:
        return float(channel.h_uu[source.user, u])
    if source.sbs != b:
        return float(channel.h_bu[source.sbs, u])
    return float(h_b[u]) if is_stronger(h_b, source.user, u) else 0.0


def build_power_problem(
    assignment: LinkAssignment,
    channel: NetworkTopology,
    queues: QueueState,
    config: ScenarioConfig,
) -> PowerProblem:
    """Power problem over every link the assignment schedules."""
    variables: List[PowerVariable] = [PowerVariable(UL, b, u) for b, u in assignment.ul_links()]
    variables += [PowerVariable(DL, b, u) for b, u in assignment.dl_links()]
    n = len(variables)
    noise, zeta = config.noise_power, config.si_cancellation
    budgets = np.array([config.p_max_ul if v.direction == UL else config.p_max_dl for v in variables])

    interference = np.zeros((n, n))
    signal = np.zeros((n, n))
    for k, receiver in enumerate(variables):
        for j, source in enumerate(variables):
            if j == k:
                signal[k, j] = channel.h_bu[receiver.sbs, receiver.user]
            else:
                interference[k, j] = _received_gain(channel, zeta, receiver, source)
    interference *= budgets / noise
    signal *= budgets / noise
    total = interference + signal

    weights = {UL: queues.weights(UL), DL: queues.weights(DL)}
    link_weights = np.array([weights[v.direction][v.user] * config.rate_scale for v in variables])
    prices = np.array(
        [
            (queues.z_ul[v.user] if v.direction == UL else queues.z_dl[v.sbs]) * budgets[j]
            for j, v in enumerate(variables)
        ]
    )
    omega_constant = float(
        sum(queues.z_ul[v.user] * config.delta_ul for v in variables if v.direction == UL)
        + queues.z_dl.sum() * config.delta_dl
    )

    constraints, bounds = _feasible_set(variables, channel, total, interference)
    return PowerProblem(
        variables=tuple(variables),
        budgets=budgets,
        total=total,
        interference=interference,
        noise=noise,
        link_weights=link_weights,
        prices=prices,
        omega_constant=omega_constant,
        constraints=constraints,
        bounds=bounds,
    )


def _feasible_set(
    variables: List[PowerVariable],
    channel: NetworkTopology,
    total: np.ndarray,
    interference: np.ndarray,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Positivity, per-user UL budgets, per-SBS DL budgets and SIC. The SIC
    condition for a DL pair (u weaker than v) reads h_v * D_u >= h_u * D'_v
    with D_u the interference plus noise at u and D'_v the total power at v,
    which is linear in the powers.
    """
    n = len(variables)
    rows: List[np.ndarray] = []
    bounds: List[float] = []
    eye = np.eye(n)
    for j, var in enumerate(variables):
        rows.append(-eye[j])
        bounds.append(0.0)
        if var.direction == UL:
            rows.append(eye[j])
            bounds.append(1.0)

    dl_by_sbs = {}
    for j, var in enumerate(variables):
        if var.direction == DL:
            dl_by_sbs.setdefault(var.sbs, []).append(j)
    for b, members in sorted(dl_by_sbs.items()):
        row = np.zeros(n)
        row[members] = 1.0
        rows.append(row)
        bounds.append(1.0)

        h_b = channel.h_bu[b]
        for k in members:
            u = variables[k].user
            for m in members:
                v = variables[m].user
                if m == k or not is_stronger(h_b, v, u):
                    continue
                # h_u (1 + total_v x) - h_v (1 + interference_u x) <= 0
                row = h_b[u] * total[m] - h_b[v] * interference[k]
                bound = float(h_b[v] - h_b[u])
                if not np.any(row) and bound >= 0:
                    continue
                rows.append(row)
                bounds.append(bound)

    if not rows:
        return np.zeros((0, n)), np.zeros(0)
    return np.vstack(rows), np.array(bounds)


def strictly_feasible_start(problem: PowerProblem, x: np.ndarray, halving_steps: int) -> np.ndarray:
    """
    Pull fixed powers strictly inside the feasible set, halving them while any
    constraint is still active or violated.
    """
    # The scaling pulls DL budgets met with equality inside.
    x = np.clip(np.asarray(x, dtype=float), 1e-6, 1.0) * (1.0 - 1e-6)
    for _ in range(halving_steps + 1):
        if problem.is_strictly_feasible(x):
            return x
        x = 0.5 * x
    raise InfeasiblePowerError(
        f"No strictly feasible power point after {halving_steps} halvings of the fixed powers"
    )


def udpo_objective(
    powers: PowerAllocation,
    assignment: LinkAssignment,
    queues: QueueState,
    channel: NetworkTopology,
    config: ScenarioConfig,
) -> float:
    """Weighted sum rate plus power-queue terms of one subframe's powers."""
    problem = build_power_problem(assignment, channel, queues, config)
    return problem.objective(problem.to_variables(powers))
