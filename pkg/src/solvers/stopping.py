"""Stopping rules and residual measurement."""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..linalg.pencil import DenseVector, MatrixPencil
from ..precond.factor import Solve, factorize_spd
from ..solver_options import SolverConfig


@dataclass(frozen=True)
class StopDecision:
    """Outcome of one stopping test.

    Attributes:
        converged: True if the run may stop
        reason: "reference", "residual" or "continue"
    """

    converged: bool
    reason: str


CONTINUE = StopDecision(False, "continue")


def stopping_check(rho: float, cfg: SolverConfig, residual: Optional[float] = None) -> StopDecision:
    """
    Gap test ρ − λ_ref ≤ tol·λ_ref when a reference is known, otherwise the
    residual test residual ≤ residual_tol·ρ.

    The iteration cap is enforced by the solver loops.
    """
    if cfg.reference_lambda is not None:
        lam = cfg.reference_lambda
        if rho - lam <= cfg.tol * lam:
            return StopDecision(True, "reference")
        return CONTINUE
    if residual is not None and residual <= cfg.residual_tol * abs(rho):
        return StopDecision(True, "residual")
    return CONTINUE


class ResidualMeter:
    """
    Residual norm ‖Ax − ρMx‖_{M⁻¹}/‖x‖_M with one mass solve per call.

    The mass matrix is factorized on first use.
    """

    def __init__(self, p: MatrixPencil):
        self._p = p
        self._solve: Optional[Solve] = None

    def __call__(self, x: DenseVector, rho: float) -> float:
        if self._solve is None:
            self._solve = factorize_spd(self._p.m)
        mx = self._p.m @ x
        r = self._p.a @ x - rho * mx
        num = float(r @ self._solve(r))
        den = float(x @ mx)
        return float(np.sqrt(max(num, 0.0) / den))
