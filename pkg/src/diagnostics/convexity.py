"""Geodesic convexity and smoothness constants of the Rayleigh quotient.

On the B-sphere {xᵀBx = 1} restricted to {f ≤ ρ_X}:

    C_X = 8κ_ν ρ_X((ρ_X − λ₁)/λ₁ + √((ρ_X − λ₁)/λ₁)·cos ϑ)
    μ_B = 2ν_min λ₁/(σ + ς)·(1 − ρ_X/ϱ) − C_X
    L_B = 2ν_max ρ_X/(σ − ς)·(1 − λ₁/λ_n) + C_X

On the M-sphere μ = 2(λ₁ + λ₂ − 2ρ_X) and L = 2(λ_n − λ₁).
"""
import logging
import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from ..config import HESSIAN_FD_STEP
from ..exceptions import DomainError
from .dense import Array, to_dense
from .quality import PreconQuality

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConvexityConstants:
    """Convexity constants on a sublevel set.

    Attributes:
        mu_b: Geodesic strong-convexity constant
        ell_b: Geodesic smoothness constant
        c_x: Correction term C_X (zero on the M-sphere)
        rho_x: Level of the sublevel set
        convex: False if the bound is inapplicable (ϱ ≤ ρ_X or μ_B ≤ 0)
    """

    mu_b: float
    ell_b: float
    c_x: float
    rho_x: float
    convex: bool = True

    @property
    def kappa_b(self) -> Optional[float]:
        """L_B/μ_B when μ_B > 0."""
        if self.mu_b > 0.0:
            return self.ell_b / self.mu_b
        return None

    def to_dict(self) -> dict:
        record = asdict(self)
        record["kappa_b"] = self.kappa_b
        return record


def _check_level(lambda1: float, lambda2: float, rho_x: float) -> None:
    if not (lambda1 * (1.0 - 1e-12) <= rho_x < 0.5 * (lambda1 + lambda2)):
        raise DomainError(f"rho_x={rho_x:.6g} outside [lambda1, (lambda1 + lambda2)/2)")


def convexity_constants(
    quality: PreconQuality,
    lambda1: float,
    lambda2: float,
    lambdan: float,
    rho_x: float,
) -> ConvexityConstants:
    """
    Evaluate the B-sphere constants from quality estimates at level ρ_X.

    The quality record must carry ν_min and ν_max. When ϱ ≤ ρ_X or the
    resulting μ_B is not positive, the constants are returned with
    convex=False.

    Raises:
        DomainError: Unless λ₁ ≤ ρ_X < (λ₁ + λ₂)/2, or ν_min/ν_max are missing
    """
    _check_level(lambda1, lambda2, rho_x)
    if not (quality.nu_min > 0.0 and quality.nu_max >= quality.nu_min):
        raise DomainError("quality record carries no nu_min/nu_max")
    sigma, varsigma = quality.sigma, quality.varsigma_est
    share = max((rho_x - lambda1) / lambda1, 0.0)
    c_x = 8.0 * quality.kappa_nu * rho_x * (share + math.sqrt(share) * quality.cos_theta_est)

    admissible = quality.varrho_est > rho_x
    mu_b = 2.0 * quality.nu_min * lambda1 / (sigma + varsigma) * (1.0 - rho_x / quality.varrho_est) - c_x
    if sigma > varsigma:
        ell_b = 2.0 * quality.nu_max * rho_x / (sigma - varsigma) * (1.0 - lambda1 / lambdan) + c_x
    else:
        ell_b = math.inf
    constants = ConvexityConstants(
        mu_b=mu_b,
        ell_b=ell_b,
        c_x=c_x,
        rho_x=rho_x,
        convex=bool(admissible and mu_b > 0.0),
    )
    if not constants.convex:
        logger.info("No geodesic convexity at rho_x=%.6g (mu_B=%.4g, varrho=%.6g)", rho_x, mu_b, quality.varrho_est)
    return constants


def m_sphere_constants(lambda1: float, lambda2: float, lambdan: float, rho_x: float) -> ConvexityConstants:
    """μ = 2(λ₁ + λ₂ − 2ρ_X), L = 2(λ_n − λ₁), valid for B = M."""
    _check_level(lambda1, lambda2, rho_x)
    return ConvexityConstants(
        mu_b=2.0 * (lambda1 + lambda2 - 2.0 * rho_x),
        ell_b=2.0 * (lambdan - lambda1),
        c_x=0.0,
        rho_x=rho_x,
    )


def b_sphere_tangent(b: Array, x: Array, v: Array):
    """
    Scale x to the B-sphere and turn v into a B-unit tangent at x.

    Returns:
        (x, v) with xᵀBx = 1, vᵀBx = 0, vᵀBv = 1
    """
    x = x / math.sqrt(float(x @ b @ x))
    bx = b @ x
    v = v - float(v @ bx) * x
    v = v - float(v @ bx) * x
    norm = math.sqrt(max(float(v @ b @ v), 0.0))
    if norm == 0.0:
        raise DomainError("Tangent direction is parallel to x")
    return x, v / norm


def geodesic_hessian_fd(a, m, b, x, v, step: float = HESSIAN_FD_STEP) -> float:
    """
    Second derivative of f along the B-sphere geodesic t ↦ x cos t + v sin t.

    x and v are first normalized by b_sphere_tangent, so the value is the
    Riemannian Hessian quadratic form for a unit tangent. Central differences
    with step h carry an O(h²) error.
    """
    a, m, b = to_dense(a), to_dense(m), to_dense(b)
    x, v = b_sphere_tangent(b, np.asarray(x, dtype=np.float64), np.asarray(v, dtype=np.float64))

    def f(t: float) -> float:
        y = x * math.cos(t) + v * math.sin(t)
        return float(y @ a @ y) / float(y @ m @ y)

    return (f(step) - 2.0 * f(0.0) + f(-step)) / step ** 2
