"""Unpreconditioned baselines on the M-sphere.

RA is RAP and SD is PSD with B = M: the only preconditioner is a mass-matrix
solve, so the iteration runs in the natural metric of the pencil.
"""
import logging
from typing import Optional

from ..linalg.pencil import MatrixPencil, as_vector
from ..precond.base import mass_preconditioner
from ..solve_result import SolveResult
from ..solver_options import SolverConfig
from .coefficients import AccelCoefficients
from .parameters import SpectrumEstimate, estimate_spectrum, m_sphere_parameters
from .psd import psd_solve
from .rap import rap_solve

logger = logging.getLogger(__name__)


def sd_solve(p: MatrixPencil, x0, cfg: SolverConfig = None) -> SolveResult:
    """Steepest descent with Rayleigh-Ritz step length, started at x0."""
    x0 = as_vector(x0, p.n, "x0")
    return psd_solve(p, mass_preconditioner(p.m), p.m @ x0, cfg, solver_name="sd")


def ra_solve(
    p: MatrixPencil,
    x0,
    cfg: SolverConfig = None,
    coeffs: Optional[AccelCoefficients] = None,
    spectrum: Optional[SpectrumEstimate] = None,
) -> SolveResult:
    """
    Riemannian acceleration on the M-sphere, started at x0.

    Args:
        p: Pencil (A, M)
        x0: Start point
        cfg: Stopping configuration
        coeffs: Acceleration coefficients; derived from the M-sphere constants
            μ = 2(λ₂ − λ₁), L = 2(λ_n − λ₁) when omitted
        spectrum: Eigenvalue estimates used when coeffs is omitted
    """
    x0 = as_vector(x0, p.n, "x0")
    if coeffs is None:
        spectrum = spectrum or estimate_spectrum(p)
        choice = m_sphere_parameters(spectrum.lambda1, spectrum.lambda2, spectrum.lambdan)
        coeffs = choice.coefficients()
        logger.info("RA: kappa=%.4g from the M-sphere constants", coeffs.kappa)
    return rap_solve(p, mass_preconditioner(p.m), coeffs, p.m @ x0, cfg, solver_name="ra")
