"""Preconditioned steepest descent (PSD) with locally optimal step length."""
import logging
from dataclasses import dataclass

from ..linalg.kernels import euclidean_gradient
from ..linalg.pencil import MatrixPencil
from ..linalg.ritz import rayleigh_ritz
from ..manifold.paired import PairedVector, combine_paired, paired_normalize
from ..precond.base import PreconditionerHandle
from ..solve_result import SolveResult
from ..solver_options import SolverConfig
from .loop import run_pencil_iterations
from .rap import initial_state

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DescentState:
    x: PairedVector


def psd_step(p: MatrixPencil, pc: PreconditionerHandle, state: DescentState) -> DescentState:
    """x⁺ = Rayleigh-Ritz minimizer over span{x, B⁻¹(Ax − ρMx)}, kept in x's hemisphere."""
    x = state.x
    ghat = euclidean_gradient(p, x.x)
    grad = PairedVector(pc.apply(ghat), ghat)
    ritz = rayleigh_ritz([x.x, grad.x], p)
    x_new = paired_normalize(combine_paired(ritz.coeffs, [x, grad]))
    if float(x_new.x @ x.xhat) < 0.0:
        x_new = x_new.scale(-1.0)
    return DescentState(x_new)


def psd_solve(
    p: MatrixPencil,
    pc: PreconditionerHandle,
    x0hat,
    cfg: SolverConfig = None,
    solver_name: str = "psd",
) -> SolveResult:
    """
    Approximate the smallest eigenpair of (A, M) with PSD.

    Args:
        p: Pencil (A, M)
        pc: Preconditioner handle applying B⁻¹
        x0hat: Start co-iterate; the start point is x₀ = B⁻¹x̂₀
        cfg: Stopping configuration
        solver_name: Name recorded in the history

    Returns:
        SolveResult unpacking as (lambda, x, history); x is a PairedVector
    """
    cfg = cfg or SolverConfig()
    x0 = initial_state(x0hat, pc, p.n).x
    return run_pencil_iterations(
        solver_name,
        p,
        cfg,
        DescentState(x0),
        step=lambda s: psd_step(p, pc, s),
        point=lambda s: s.x.x,
        result_point=lambda s: s.x,
    )
