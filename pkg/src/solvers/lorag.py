"""Locally optimal Riemannian accelerated gradient (LORAG) on the unit sphere.

The recurrence works with exponential and logarithmic maps only; the
x-update minimizes the objective over the geodesic image of a
two-dimensional tangent subspace, delegated to a subspace oracle.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Protocol, Sequence

import numpy as np

from ..linalg.kernels import euclidean_gradient, rayleigh_quotient
from ..linalg.pencil import MatrixPencil
from ..linalg.ritz import rayleigh_ritz
from ..manifold.sphere import (
    SpherePoint,
    TangentVector,
    exp_map,
    log_map,
    project_tangent,
)
from ..solve_result import SolveResult
from ..solver_options import SolverConfig
from .coefficients import AccelCoefficients
from .loop import run_iterations

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SphereOps:
    """Manifold operations used by the recurrence."""

    exp: Callable[[SpherePoint, TangentVector], SpherePoint]
    log: Callable[[SpherePoint, SpherePoint], TangentVector]
    project: Callable[[SpherePoint, np.ndarray], TangentVector]


UNIT_SPHERE = SphereOps(exp=exp_map, log=log_map, project=project_tangent)


class SphereObjective(Protocol):
    """Smooth objective on the sphere with a subspace-minimization oracle."""

    def value(self, x: SpherePoint) -> float:
        ...

    def gradient(self, x: SpherePoint) -> TangentVector:
        """Riemannian gradient at x."""
        ...

    def minimize_over(self, y: SpherePoint, directions: Sequence[TangentVector]) -> SpherePoint:
        """Minimizer over exp_y(span(directions))."""
        ...


class RayleighObjective:
    """Rayleigh quotient of a pencil restricted to the unit sphere.

    The geodesic image of a tangent subspace at y is the unit sphere of
    span{y, directions}, so the oracle is a Rayleigh-Ritz projection.
    """

    def __init__(self, p: MatrixPencil):
        self.p = p

    def value(self, x: SpherePoint) -> float:
        return rayleigh_quotient(self.p, x.coords)

    def gradient(self, x: SpherePoint) -> TangentVector:
        return project_tangent(x, euclidean_gradient(self.p, x.coords))

    def minimize_over(self, y: SpherePoint, directions: Sequence[TangentVector]) -> SpherePoint:
        ritz = rayleigh_ritz([y.coords] + [d.dir for d in directions], self.p)
        return SpherePoint.normalized(ritz.vector)


@dataclass(frozen=True)
class LoragState:
    x: SpherePoint
    v: SpherePoint
    y: SpherePoint


def lorag_step(ops: SphereOps, objective: SphereObjective, coeffs: AccelCoefficients, state: LoragState) -> LoragState:
    """
    One LORAG iteration.

        y = exp_x(α/(1+α+β)·log_x v)
        x⁺ = argmin f over exp_y(span{grad f(y), log_y x})
        v⁺ = exp_y((1−α)/(1+β)·log_y v − α/γ̄·grad f(y))
    """
    x, v = state.x, state.v
    to_v = ops.log(x, v)
    y = ops.exp(x, TangentVector(x, coeffs.y_weight * to_v.dir))

    grad = objective.gradient(y)
    back_to_x = ops.log(y, x)
    x_new = objective.minimize_over(y, [grad, back_to_x])
    if float(x_new.coords @ x.coords) < 0.0:
        x_new = SpherePoint(-x_new.coords)

    momentum = ops.log(y, v)
    step = coeffs.momentum_weight * momentum.dir - coeffs.gradient_weight * grad.dir
    v_new = ops.exp(y, ops.project(y, step))
    return LoragState(x=x_new, v=v_new, y=y)


def lorag_solve(
    ops: SphereOps,
    objective: SphereObjective,
    coeffs: AccelCoefficients,
    x0,
    cfg: SolverConfig = None,
) -> SolveResult:
    """
    Minimize a smooth objective on the unit sphere with LORAG.

    Without a reference value the run stops when ‖grad f‖ ≤ residual_tol·|f|.

    Args:
        ops: Manifold operations (UNIT_SPHERE)
        objective: Objective with gradient and subspace oracle
        coeffs: Acceleration coefficients
        x0: Start point (SpherePoint or nonzero vector, normalized here)
        cfg: Stopping configuration

    Returns:
        SolveResult unpacking as (f_min, x, history); x is a SpherePoint

    Raises:
        DomainError: If x0 is the zero vector
        NumericalBreakdownError: If the subspace oracle or a sphere operation
            fails during a step (degenerate Ritz basis, undefined log map);
            carries the last valid iterate and the history so far
    """
    cfg = cfg or SolverConfig()
    start = x0 if isinstance(x0, SpherePoint) else SpherePoint.normalized(x0)
    logger.info("LORAG: n=%d, tol=%.1e, max_iter=%d", start.n, cfg.tol, cfg.max_iter)
    return run_iterations(
        "lorag",
        cfg,
        LoragState(x=start, v=start, y=start),
        step=lambda s: lorag_step(ops, objective, coeffs, s),
        value=lambda s: objective.value(s.x),
        result_point=lambda s: s.x,
        residual=lambda s, f: objective.gradient(s.x).norm,
    )
