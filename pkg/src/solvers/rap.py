"""Riemannian acceleration with preconditioning (RAP).

Accelerated Rayleigh-quotient minimization on the B-sphere {xᵀBx = 1}. Every
point is a PairedVector (x, x̂ = Bx): preconditioned gradients g = B⁻¹ĝ come
paired with their Euclidean gradients ĝ, and all linear combinations are
applied to both halves, so B itself is never applied.

One iteration has three phases:

    y-update   y = x cos θ + w sin θ,  θ = α/(α+β+1)·∠(x, v)
    v-update   v = exp_y(c·p − α/γ̄·g), p the unit direction from y to v
    x-update   Rayleigh-Ritz over span{x, y, g}
"""
import logging
from dataclasses import dataclass

import numpy as np

from ..config import DEGENERATE_DIRECTION_TOL
from ..exceptions import ConsistencyError, DimensionMismatchError, DomainError, NumericalBreakdownError
from ..linalg.kernels import euclidean_gradient
from ..linalg.pencil import DenseVector, MatrixPencil, as_vector
from ..linalg.ritz import rayleigh_ritz
from ..manifold.paired import (
    PairedVector,
    combine_paired,
    paired_geodesic_step,
    paired_normalize,
    paired_unit_direction,
)
from ..precond.base import PreconditionerHandle
from ..solve_result import SolveResult
from ..solver_options import SolverConfig
from .coefficients import AccelCoefficients
from .loop import run_pencil_iterations

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IterateState:
    """RAP state after one iteration.

    Attributes:
        x, v, y: B-normalized paired iterates
        ghat: Euclidean gradient at y
        g: Preconditioned gradient B⁻¹ĝ
    """

    x: PairedVector
    v: PairedVector
    y: PairedVector
    ghat: DenseVector
    g: DenseVector


def _b_unit_orthogonal(q: PairedVector, base: PairedVector):
    """B-unit direction of q with its base component removed twice."""
    q = q.orthogonalize(base).orthogonalize(base)
    return paired_unit_direction(q)


def _same_hemisphere(new: PairedVector, old: PairedVector) -> PairedVector:
    """Flip new so that ⟨new, x̂_old⟩ ≥ 0."""
    if float(new.x @ old.xhat) < 0.0:
        return new.scale(-1.0)
    return new


def _gradient_pair(p: MatrixPencil, pc: PreconditionerHandle, point: PairedVector) -> PairedVector:
    ghat = euclidean_gradient(p, point.x)
    return PairedVector(pc.apply(ghat), ghat)


def _degenerate_step(p: MatrixPencil, pc: PreconditionerHandle, coeffs: AccelCoefficients, state: IterateState) -> IterateState:
    """
    Step used when v is B-parallel to x: y = x, a gradient-only v-step and a
    two-vector Rayleigh-Ritz over {x, g}.
    """
    x = state.x
    grad = _gradient_pair(p, pc, x)
    q_unit, q_norm = _b_unit_orthogonal(grad.scale(-coeffs.gradient_weight), x)
    v = paired_geodesic_step(x, q_unit, q_norm) if q_norm > 0.0 else x

    ritz = rayleigh_ritz([x.x, grad.x], p)
    x_new = paired_normalize(combine_paired(ritz.coeffs, [x, grad]))
    return IterateState(x=_same_hemisphere(x_new, x), v=v, y=x, ghat=grad.xhat, g=grad.x)


def rap_step(p: MatrixPencil, pc: PreconditionerHandle, coeffs: AccelCoefficients, state: IterateState, v_step: str = "listing") -> IterateState:
    """
    One RAP iteration.

    Args:
        p: Pencil (A, M)
        pc: Preconditioner B⁻¹
        coeffs: Acceleration coefficients
        state: Current iterates
        v_step: "listing" weights the momentum direction by (1 − α)θ/α,
            "log_map" by (1 − α)/(1 + β)·∠(y, v); both agree in exact arithmetic

    Returns:
        Next IterateState
    """
    x, v = state.x, state.v

    # y-update
    c = float(np.clip(x.b_inner(v), -1.0, 1.0))
    w = v.combine(1.0, x, -c)
    w_unit, w_norm = _b_unit_orthogonal(w, x)
    if w_norm < DEGENERATE_DIRECTION_TOL or np.linalg.norm(w.x) < DEGENERATE_DIRECTION_TOL * np.linalg.norm(v.x):
        return _degenerate_step(p, pc, coeffs, state)
    theta = coeffs.y_weight * float(np.arctan2(w_norm, c))
    y = paired_geodesic_step(x, w_unit, theta)

    # v-update
    grad = _gradient_pair(p, pc, y)
    c_yv = float(np.clip(y.b_inner(v), -1.0, 1.0))
    p_unit, p_norm = _b_unit_orthogonal(v.combine(1.0, y, -c_yv), y)
    if v_step == "listing":
        p_weight = (1.0 - coeffs.alpha) * theta / coeffs.alpha
    else:
        p_weight = coeffs.momentum_weight * float(np.arctan2(p_norm, c_yv))
    if p_norm == 0.0:
        p_weight = 0.0
    q = p_unit.scale(p_weight).combine(1.0, grad, -coeffs.gradient_weight)
    q_unit, q_norm = _b_unit_orthogonal(q, y)
    v_new = paired_geodesic_step(y, q_unit, q_norm) if q_norm > 0.0 else y

    # x-update
    ritz = rayleigh_ritz([x.x, y.x, grad.x], p)
    x_new = paired_normalize(combine_paired(ritz.coeffs, [x, y, grad]))
    return IterateState(x=_same_hemisphere(x_new, x), v=v_new, y=y, ghat=grad.xhat, g=grad.x)


def initial_state(x0hat, pc: PreconditionerHandle, n: int) -> IterateState:
    """x₀ = B⁻¹x̂₀ B-normalized, with v₀ = y₀ = x₀."""
    x0hat = as_vector(x0hat, n, "x0hat")
    if pc.n != n:
        raise DimensionMismatchError(n, pc.n, "preconditioner")
    if not np.any(x0hat):
        raise DomainError("Start vector x0hat must be nonzero")
    try:
        x0 = paired_normalize(PairedVector.from_twin(x0hat, pc.apply))
    except ConsistencyError as e:
        raise NumericalBreakdownError(0, f"preconditioner is not positive definite: {e}") from e
    zero = np.zeros(n)
    return IterateState(x=x0, v=x0, y=x0, ghat=zero, g=zero)


def rap_solve(
    p: MatrixPencil,
    pc: PreconditionerHandle,
    coeffs: AccelCoefficients,
    x0hat,
    cfg: SolverConfig = None,
    solver_name: str = "rap",
) -> SolveResult:
    """
    Approximate the smallest eigenpair of (A, M) with RAP.

    Args:
        p: Pencil (A, M)
        pc: Preconditioner handle applying B⁻¹
        coeffs: Acceleration coefficients
        x0hat: Start co-iterate x̂₀; the start point is x₀ = B⁻¹x̂₀
        cfg: Stopping configuration (defaults when None)
        solver_name: Name recorded in the history

    Returns:
        SolveResult unpacking as (lambda, x, history); x is a PairedVector

    Raises:
        NumericalBreakdownError: If ⟨x, x̂⟩ ≤ 0 is detected during a normalization
    """
    cfg = cfg or SolverConfig()
    state = initial_state(x0hat, pc, p.n)
    return run_pencil_iterations(
        solver_name,
        p,
        cfg,
        state,
        step=lambda s: rap_step(p, pc, coeffs, s, cfg.v_step),
        point=lambda s: s.x.x,
        result_point=lambda s: s.x,
    )
