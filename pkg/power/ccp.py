"""
Convex-concave procedure for the power problem.

Every iteration replaces the convex part G by its tangent plane at the current
iterate. The tangent never exceeds G, so the surrogate F + tangent + Omega is
a concave minorizer of the objective that touches it at the iterate, and its
maximizer cannot lower the objective.
"""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from logger import log_debug, log_warning
from network.config import ScenarioConfig
from power.barrier import BarrierResult, BarrierSolver, ConcaveProgram, OptimizationSettings
from power.problem import PowerProblem


@dataclass(frozen=True)
class CcpIteration:
    index: int
    objective: float
    improvement: float
    newton_steps: int


@dataclass
class CcpResult:
    """
    Attributes:
        solution: normalized powers of the best iterate
        objective: objective value at solution
        trace: objective at the start point and after every accepted iteration
        surrogate_trace: objective at the start point and at every surrogate optimum, rejected ones included
        iterations: per-iteration diagnostics
        converged: improvement fell below the threshold
        hit_iteration_cap: stopped by max_iterations
        warnings: solver messages worth reporting
    """

    solution: np.ndarray
    objective: float
    trace: List[float]
    iterations: List[CcpIteration]
    converged: bool
    hit_iteration_cap: bool
    warnings: List[str] = field(default_factory=list)
    surrogate_trace: List[float] = field(default_factory=list)


def surrogate_program(problem: PowerProblem, x_ref: np.ndarray) -> ConcaveProgram:
    """F + tangent of G at x_ref + Omega, scaled by the problem's objective scale."""
    tangent = problem.linearize_convex(x_ref)
    scale = problem.objective_scale
    linear = (tangent.gradient - problem.prices) / scale

    def objective(x: np.ndarray) -> float:
        return (problem.concave_part(x) + tangent(x) + problem.affine_part(x)) / scale

    def gradient(x: np.ndarray) -> np.ndarray:
        return problem.concave_gradient(x) / scale + linear

    def hessian(x: np.ndarray) -> np.ndarray:
        return problem.concave_hessian(x) / scale

    return ConcaveProgram(
        objective=objective,
        gradient=gradient,
        hessian=hessian,
        constraints=problem.constraints,
        bounds=problem.bounds,
    )


def barrier_settings(config: ScenarioConfig) -> OptimizationSettings:
    return OptimizationSettings(outer_tolerance=config.barrier_tolerance)


def run_ccp(
    problem: PowerProblem,
    x0: np.ndarray,
    max_iterations: int = 50,
    relative_tolerance: float = 1e-3,
    settings: Optional[OptimizationSettings] = None,
) -> CcpResult:
    """
    Maximize the power objective from a strictly feasible x0.

    Stops once an iteration improves the objective by at most
    relative_tolerance * |objective(x0)|. An iterate that would lower the
    objective is discarded and ends the run.
    """
    solver = BarrierSolver(settings)
    x = np.asarray(x0, dtype=float).copy()
    current = problem.objective(x)
    threshold = relative_tolerance * max(abs(current), 1e-300)
    trace = [current]
    surrogate_trace = [current]
    iterations: List[CcpIteration] = []
    warnings: List[str] = []

    def finish(converged: bool) -> CcpResult:
        return CcpResult(
            x,
            current,
            trace,
            iterations,
            converged=converged,
            hit_iteration_cap=not converged,
            warnings=warnings,
            surrogate_trace=surrogate_trace,
        )

    if problem.size == 0:
        return finish(True)

    anchor = x.copy()
    for index in range(max_iterations):
        # Start each barrier run slightly off the previous optimum, toward the
        # strictly feasible x0, so its slacks are not vanishingly small.
        start = 0.999 * x + 0.001 * anchor
        result: BarrierResult = solver.solve(surrogate_program(problem, x), start)
        warnings.extend(result.messages)
        candidate = problem.objective(result.solution)
        surrogate_trace.append(candidate)
        improvement = candidate - current
        if improvement < 0:
            log_debug(f"CCP iteration {index} would lower the objective by {-improvement:.3e}; stopping")
            return finish(True)

        x, current = result.solution, candidate
        trace.append(current)
        iterations.append(
            CcpIteration(index=index, objective=current, improvement=improvement, newton_steps=result.newton_steps)
        )
        if improvement <= threshold:
            return finish(True)

    message = f"CCP reached its cap of {max_iterations} iterations"
    log_warning(message)
    warnings.append(message)
    return finish(False)


def optimize_powers(problem: PowerProblem, x0: np.ndarray, config: ScenarioConfig) -> CcpResult:
    """run_ccp with the solver settings of a scenario."""
    return run_ccp(
        problem,
        x0,
        max_iterations=config.ccp_max_iterations,
        relative_tolerance=config.ccp_relative_tolerance,
        settings=barrier_settings(config),
    )
