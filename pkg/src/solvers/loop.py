"""Iteration driver shared by the eigensolvers.

Owns the history, the stopping test and the conversion of consistency
failures into NumericalBreakdownError; the solvers only supply a step.
"""
import logging
import time
from typing import Callable, Optional, TypeVar

from ..exceptions import ConsistencyError, DegenerateBasisError, GeometryError, NumericalBreakdownError
from ..linalg.kernels import rayleigh_quotient
from ..linalg.pencil import DenseVector, MatrixPencil
from ..solve_result import ConvergenceHistory, SolveResult
from ..solver_options import SolverConfig
from .stopping import ResidualMeter, stopping_check

logger = logging.getLogger(__name__)

State = TypeVar("State")

BREAKDOWN_ERRORS = (ConsistencyError, DegenerateBasisError, GeometryError)


def run_iterations(
    solver: str,
    cfg: SolverConfig,
    state: State,
    step: Callable[[State], State],
    value: Callable[[State], float],
    result_point: Callable[[State], object],
    residual: Optional[Callable[[State, float], float]] = None,
) -> SolveResult:
    """
    Iterate step() until the stopping test passes or max_iter is reached.

    Args:
        solver: Name recorded in the history and logs
        cfg: Stopping configuration
        state: Initial solver state
        step: State transition of one iteration
        value: Objective at the current iterate (the Rayleigh quotient ρ_m)
        result_point: Extracts the object returned as SolveResult.x
        residual: Residual norm at the current iterate given its value;
            evaluated only when cfg needs it

    Raises:
        NumericalBreakdownError: If a step loses B-consistency; carries the last
            valid iterate and the history so far
    """
    history = ConvergenceHistory(solver=solver, reference_lambda=cfg.reference_lambda)
    measure = residual if (residual is not None and cfg.needs_residual) else None
    start = time.perf_counter()

    def observe(current: State) -> bool:
        rho = value(current)
        res = measure(current, rho) if measure is not None else None
        history.record(rho, res, 1000.0 * (time.perf_counter() - start))
        decision = stopping_check(rho, cfg, res)
        if decision.converged:
            history.stop_reason = decision.reason
        return decision.converged

    converged = observe(state)
    iteration = 0
    while not converged and iteration < cfg.max_iter:
        try:
            new_state = step(state)
        except BREAKDOWN_ERRORS as e:
            history.finish(False, "breakdown", time.perf_counter() - start)
            logger.warning("%s: breakdown at iteration %d: %s", solver.upper(), iteration + 1, e)
            raise NumericalBreakdownError(
                iteration + 1, str(e), last_iterate=result_point(state), history=history
            ) from e
        state = new_state
        iteration += 1
        converged = observe(state)
        logger.debug("%s iter %d: rho=%.16g", solver.upper(), iteration, history.final_value)

    history.finish(converged, history.stop_reason if converged else "max_iter", time.perf_counter() - start)
    logger.info(
        "%s: %s after %d iterations, rho=%.15g (%.3f s)",
        solver.upper(),
        "converged" if converged else "not converged",
        history.iterations,
        history.final_value,
        history.wall_time,
    )
    return SolveResult(history.final_value, result_point(state), history)


def run_pencil_iterations(
    solver: str,
    p: MatrixPencil,
    cfg: SolverConfig,
    state: State,
    step: Callable[[State], State],
    point: Callable[[State], DenseVector],
    result_point: Callable[[State], object],
) -> SolveResult:
    """run_iterations monitoring the Rayleigh quotient of p at point(state)."""
    meter = ResidualMeter(p)
    logger.info("%s: n=%d, tol=%.1e, max_iter=%d", solver.upper(), p.n, cfg.tol, cfg.max_iter)
    return run_iterations(
        solver,
        cfg,
        state,
        step,
        value=lambda s: rayleigh_quotient(p, point(s)),
        result_point=result_point,
        residual=lambda s, rho: meter(point(s), rho),
    )
