"""Selection of the convexity and smoothness constants (μ, L).

The true constants depend on the unknown eigenvalues and on the spectrum of
B⁻¹A. Cheap estimates are plugged into the leading terms of the B-sphere
bounds: λ̃₁, λ̃₂ from the coarse pencil, λ̃_n and ν̃ from a few Lanczos steps,
σ̃ from the start point. κ = L/μ is floored at 9.
"""
import logging
from dataclasses import asdict, dataclass
from typing import Optional, Tuple

import numpy as np
import scipy.sparse.linalg as spla

from ..config import DEFAULT_SEED, DENSE_REFERENCE_MAX_DIM, KAPPA_FLOOR, PARAMETER_LANCZOS_ITERS
from ..exceptions import DomainError
from ..linalg.lanczos import extremal_pencil_eigs
from ..linalg.oracle import dense_generalized_eig
from ..linalg.pencil import MatrixPencil
from ..manifold.paired import PairedVector
from ..precond.base import PreconditionerHandle
from ..precond.factor import factorize_spd
from .coefficients import AccelCoefficients, compute_coefficients

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpectrumEstimate:
    """Estimates of λ₁ ≤ λ₂ and λ_n of a pencil."""

    lambda1: float
    lambda2: float
    lambdan: float


@dataclass(frozen=True)
class ParameterChoice:
    """Selected (μ, L) with the inputs they were computed from.

    Attributes:
        mu, ell: Constants handed to compute_coefficients
        source: "auto", "manual" or "m_sphere"
        floored: True if L was raised to reach κ = 9
        nu_min, nu_max, sigma: Preconditioner estimates (NaN for manual choices)
        spectrum: Eigenvalue estimates (None for manual choices)
    """

    mu: float
    ell: float
    source: str
    floored: bool = False
    nu_min: float = float("nan")
    nu_max: float = float("nan")
    sigma: float = float("nan")
    spectrum: Optional[SpectrumEstimate] = None

    @property
    def kappa(self) -> float:
        return self.ell / self.mu

    def coefficients(self, variant: str = "algorithm") -> AccelCoefficients:
        return compute_coefficients(self.mu, self.ell, variant)

    def to_dict(self) -> dict:
        record = asdict(self)
        spectrum = record.pop("spectrum") or {}
        record.update(spectrum)
        record["kappa"] = self.kappa
        return record


def _floor_kappa(mu: float, ell: float) -> Tuple[float, bool]:
    if ell < KAPPA_FLOOR * mu:
        return KAPPA_FLOOR * mu, True
    return ell, False


def estimate_spectrum(p: MatrixPencil, coarse_pencil: Optional[MatrixPencil] = None, seed: int = DEFAULT_SEED) -> SpectrumEstimate:
    """
    Estimate λ₁, λ₂ and λ_n of (A, M).

    Small pencils are solved densely. Otherwise λ₁, λ₂ come from the coarse
    pencil when one is given (Galerkin upper bounds) or from eigsh, and λ_n
    from Lanczos on M⁻¹A.
    """
    if p.n <= DENSE_REFERENCE_MAX_DIM:
        values, _ = dense_generalized_eig(p)
        lambda2 = values[1] if p.n > 1 else values[0]
        return SpectrumEstimate(float(values[0]), float(lambda2), float(values[-1]))

    if coarse_pencil is not None and coarse_pencil.n >= 2 and coarse_pencil.n <= DENSE_REFERENCE_MAX_DIM:
        values, _ = dense_generalized_eig(coarse_pencil)
        lambda1, lambda2 = float(values[0]), float(values[1])
    else:
        values = spla.eigsh(p.a.csr, k=2, M=p.m.csr, which="SA", return_eigenvectors=False)
        lambda1, lambda2 = (float(v) for v in np.sort(values))
    top = extremal_pencil_eigs(p.a, factorize_spd(p.m), iters=4 * PARAMETER_LANCZOS_ITERS, seed=seed)
    return SpectrumEstimate(lambda1, lambda2, max(top.nu_max, lambda2))


def select_parameters(
    p: MatrixPencil,
    pc: PreconditionerHandle,
    x0: PairedVector,
    coarse_pencil: Optional[MatrixPencil] = None,
    mu: Optional[float] = None,
    ell: Optional[float] = None,
    iters: int = PARAMETER_LANCZOS_ITERS,
    seed: int = DEFAULT_SEED,
) -> ParameterChoice:
    """
    Choose (μ, L) for RAP on the B-sphere.

        μ = 2ν̃_min λ̃₁(1 − λ̃₁/λ̃₂)/σ̃,  L = 2ν̃_max λ̃₁(1 − λ̃₁/λ̃_n)/σ̃

    with σ̃ = x₀ᵀAx₀/x₀ᵀBx₀. The result is invariant under scaling (A, M).

    Args:
        p: Pencil (A, M)
        pc: Preconditioner B⁻¹
        x0: Start point
        coarse_pencil: Optional coarse pencil for λ̃₁, λ̃₂
        mu, ell: Manual override; both or neither
        iters: Lanczos steps for ν̃
        seed: Seed of the Lanczos start vector

    Raises:
        DomainError: If only one of mu, ell is given or the estimates are degenerate
    """
    if (mu is None) != (ell is None):
        raise DomainError("mu and L must be given together")
    if mu is not None:
        logger.info("Using manual parameters mu=%.6g L=%.6g", mu, ell)
        return ParameterChoice(mu=mu, ell=ell, source="manual")

    nu = extremal_pencil_eigs(p.a, pc.apply, iters=iters, seed=seed)
    spectrum = estimate_spectrum(p, coarse_pencil, seed)
    sigma = float(x0.x @ (p.a @ x0.x)) / x0.b_norm_squared()
    lam1, lam2, lamn = spectrum.lambda1, spectrum.lambda2, spectrum.lambdan
    if not (0.0 < lam1 < lam2 <= lamn):
        raise DomainError(f"degenerate spectrum estimate: {lam1}, {lam2}, {lamn}")

    est_mu = 2.0 * nu.nu_min * lam1 * (1.0 - lam1 / lam2) / sigma
    est_ell = 2.0 * nu.nu_max * lam1 * (1.0 - lam1 / lamn) / sigma
    est_ell, floored = _floor_kappa(est_mu, max(est_ell, est_mu))
    choice = ParameterChoice(
        mu=est_mu,
        ell=est_ell,
        source="auto",
        floored=floored,
        nu_min=nu.nu_min,
        nu_max=nu.nu_max,
        sigma=sigma,
        spectrum=spectrum,
    )
    logger.info(
        "Selected mu=%.6g L=%.6g (kappa=%.3g%s, nu in [%.4g, %.4g])",
        choice.mu, choice.ell, choice.kappa, ", floored" if floored else "", nu.nu_min, nu.nu_max,
    )
    return choice


def m_sphere_parameters(lambda1: float, lambda2: float, lambdan: float, rho_x: Optional[float] = None) -> ParameterChoice:
    """
    Constants of the Rayleigh quotient on the M-sphere restricted to {f ≤ ρ_X}:
    μ = 2(λ₁ + λ₂ − 2ρ_X), L = 2(λ_n − λ₁). ρ_X defaults to λ₁.

    Raises:
        DomainError: Unless λ₁ ≤ ρ_X < (λ₁ + λ₂)/2
    """
    rho_x = lambda1 if rho_x is None else rho_x
    if not (lambda1 <= rho_x < 0.5 * (lambda1 + lambda2)):
        raise DomainError(f"rho_x={rho_x} outside [lambda1, (lambda1 + lambda2)/2)")
    mu = 2.0 * (lambda1 + lambda2 - 2.0 * rho_x)
    ell, floored = _floor_kappa(mu, max(2.0 * (lambdan - lambda1), mu))
    return ParameterChoice(
        mu=mu,
        ell=ell,
        source="m_sphere",
        floored=floored,
        spectrum=SpectrumEstimate(lambda1, lambda2, lambdan),
    )
