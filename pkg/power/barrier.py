"""
Log-barrier interior point method for small concave maximization problems
with linear inequality constraints.

Each centering step minimizes t * (-f(x)) - sum(log(d - C x)) with damped
Newton steps and a backtracking line search that keeps every iterate strictly
feasible. The barrier parameter grows by barrier_multiplier until the duality
gap bound m / t falls below outer_tolerance.
"""

from dataclasses import dataclass, field
from typing import Callable, List, Literal, Optional, Tuple

import numpy as np

from errors import BarrierMethodError, NewtonStepError

Vector = np.ndarray


@dataclass
class OptimizationSettings:
    """
    Parameters
    ----------
    outer_tolerance : float
        Bound on the duality gap m / t of the returned point, in objective units.
    barrier_multiplier : float
        Factor applied to t after every centering step.
    initial_barrier : float
        Barrier parameter of the first centering step.
    inner_tolerance : float
        Half the squared Newton decrement at which a centering step stops.
    inner_tolerance_soft : float
        Accepted instead of inner_tolerance when the line search stalls.
    max_inner_iterations : int
        Newton steps allowed per centering step.
    max_outer_iterations : int
        Centering steps allowed in total.
    backtracking_alpha, backtracking_beta : float
        Sufficient decrease factor and step shrink factor of the line search.
    backtracking_min_step : float
        Smallest step tried before the line search gives up.
    quadratic_threshold : float
        Squared Newton decrement under which full steps skip the line search.
    """

    outer_tolerance: float = 1e-9
    barrier_multiplier: float = 10.0
    initial_barrier: float = 1.0
    inner_tolerance: float = 1e-10
    inner_tolerance_soft: float = 1e-6
    max_inner_iterations: int = 100
    max_outer_iterations: int = 40
    backtracking_alpha: float = 0.01
    backtracking_beta: float = 0.5
    backtracking_min_step: float = 1e-12
    quadratic_threshold: float = 1e-2


@dataclass
class NewtonResult:
    solution: Vector
    suboptimalities: List[float]
    nits: int
    # 0: solved to inner_tolerance, 1: stalled within inner_tolerance_soft
    status: Literal[0, 1]


@dataclass
class BarrierResult:
    solution: Vector
    objective_value: float
    duality_gap: float
    outer_iterations: int
    newton_steps: int
    messages: List[str] = field(default_factory=list)


@dataclass(frozen=True)
class ConcaveProgram:
    """maximize objective(x) subject to constraints @ x <= bounds."""

    objective: Callable[[Vector], float]
    gradient: Callable[[Vector], Vector]
    hessian: Callable[[Vector], np.ndarray]
    constraints: np.ndarray
    bounds: np.ndarray

    @property
    def num_constraints(self) -> int:
        return int(self.constraints.shape[0])

    def slack(self, x: Vector) -> Vector:
        return self.bounds - self.constraints @ x

    def barrier_objective(self, x: Vector, t: float) -> float:
        s = self.slack(x)
        if np.any(s <= 0):
            return np.inf
        return float(-t * self.objective(x) - np.log(s).sum())


class BarrierSolver:
    def __init__(self, settings: Optional[OptimizationSettings] = None) -> None:
        self.settings = settings or OptimizationSettings()

    def newton_step(self, program: ConcaveProgram, x: Vector, t: float) -> Tuple[Vector, Vector]:
        s = program.slack(x)
        c = program.constraints
        grad = -t * program.gradient(x) + c.T @ (1.0 / s)
        hess = -t * program.hessian(x) + (c.T / s**2) @ c
        try:
            step = np.linalg.solve(hess, -grad)
        except np.linalg.LinAlgError as e:
            raise NewtonStepError("Singular Newton system") from e
        if not np.all(np.isfinite(step)):
            raise NewtonStepError("Newton step is not finite")
        return step, grad

    def backtracking_line_search(
        self, program: ConcaveProgram, x: Vector, step: Vector, t: float, lambda_squared: float
    ) -> float:
        alpha = self.settings.backtracking_alpha
        beta = self.settings.backtracking_beta
        growth = program.constraints @ step
        s = program.slack(x)
        limit = s[growth > 0] / growth[growth > 0]
        btls_s = min(1.0, 0.99 * limit.min()) if limit.size else 1.0
        # Inside the quadratic convergence region a full step is taken as is:
        # at large t the barrier value is too coarse to compare.
        if btls_s == 1.0 and lambda_squared < self.settings.quadratic_threshold:
            return btls_s

        ft = program.barrier_objective(x, t)
        while program.barrier_objective(x + btls_s * step, t) > ft - alpha * btls_s * lambda_squared:
            btls_s *= beta
            if btls_s < self.settings.backtracking_min_step:
                return 0.0
        return btls_s

    def centering_step(self, program: ConcaveProgram, x0: Vector, t: float) -> NewtonResult:
        x = x0.copy()
        suboptimalities: List[float] = []
        for nit in range(self.settings.max_inner_iterations):
            step, grad = self.newton_step(program, x, t)
            lambda_squared = float(-grad @ step)
            suboptimality = 0.5 * lambda_squared
            suboptimalities.append(suboptimality)
            if suboptimality < self.settings.inner_tolerance:
                return NewtonResult(solution=x, suboptimalities=suboptimalities, nits=nit + 1, status=0)

            btls_s = self.backtracking_line_search(program, x, step, t, lambda_squared)
            if btls_s == 0.0:
                if suboptimality < self.settings.inner_tolerance_soft:
                    return NewtonResult(solution=x, suboptimalities=suboptimalities, nits=nit + 1, status=1)
                raise BarrierMethodError(
                    f"Line search stalled with suboptimality {suboptimality:.3e}", last_iterate=x
                )
            x = x + btls_s * step

        if suboptimalities and suboptimalities[-1] < self.settings.inner_tolerance_soft:
            return NewtonResult(solution=x, suboptimalities=suboptimalities, nits=len(suboptimalities), status=1)
        raise BarrierMethodError("Centering step did not converge", last_iterate=x)

    def solve(self, program: ConcaveProgram, x0: Vector) -> BarrierResult:
        """Maximize a concave program from a strictly feasible x0."""
        if np.any(program.slack(x0) <= 0):
            raise BarrierMethodError("Starting point is not strictly feasible", last_iterate=x0)
        m = max(program.num_constraints, 1)
        t = self.settings.initial_barrier
        x = np.asarray(x0, dtype=float).copy()
        newton_steps = 0
        messages: List[str] = []
        for outer in range(self.settings.max_outer_iterations):
            try:
                result = self.centering_step(program, x, t)
            except NewtonStepError as e:
                raise BarrierMethodError(str(e), last_iterate=x) from e
            x = result.solution
            newton_steps += result.nits
            if result.status == 1:
                messages.append(f"Centering at t={t:.1e} stopped at the soft tolerance")
            if m / t < self.settings.outer_tolerance:
                return BarrierResult(
                    solution=x,
                    objective_value=program.objective(x),
                    duality_gap=m / t,
                    outer_iterations=outer + 1,
                    newton_steps=newton_steps,
                    messages=messages,
                )
            t *= self.settings.barrier_multiplier
        raise BarrierMethodError(
            f"Duality gap {m / t:.3e} still above {self.settings.outer_tolerance:.1e}", last_iterate=x
        )
