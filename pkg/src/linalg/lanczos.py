"""Extremal eigenvalue estimates of a preconditioned operator B⁻¹A.

B⁻¹A is self-adjoint in the A-inner product, so a Lanczos recurrence in that
inner product produces a symmetric tridiagonal matrix whose extreme Ritz
values bracket ν_min and ν_max from inside.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import scipy.linalg as sla

from ..config import DEFAULT_SEED, PARAMETER_LANCZOS_ITERS
from ..exceptions import DomainError
from .pencil import DenseVector, SpdMatrix

logger = logging.getLogger(__name__)

BREAKDOWN_TOL = 1e-12


@dataclass
class LanczosEstimate:
    """Ritz estimates of the extreme eigenvalues of B⁻¹A.

    Attributes:
        nu_min: Smallest Ritz value (≥ ν_min)
        nu_max: Largest Ritz value (≤ ν_max)
        iterations: Lanczos steps performed
        breakdown: True if the Krylov space became invariant early
    """

    nu_min: float
    nu_max: float
    iterations: int
    breakdown: bool

    @property
    def kappa(self) -> float:
        return self.nu_max / self.nu_min


def extremal_pencil_eigs(
    a: SpdMatrix,
    apply_binv: Callable[[DenseVector], DenseVector],
    iters: int = PARAMETER_LANCZOS_ITERS,
    seed: int = DEFAULT_SEED,
    start: Optional[DenseVector] = None,
) -> LanczosEstimate:
    """
    Estimate ν_min and ν_max of B⁻¹A by A-inner-product Lanczos.

    Full reorthogonalization keeps the basis A-orthonormal. One A product and
    one B⁻¹ application are spent per step.

    Args:
        a: SPD matrix A
        apply_binv: Action r ↦ B⁻¹r of an SPD preconditioner
        iters: Maximum number of Lanczos steps
        seed: Seed of the random start vector
        start: Optional start vector instead of the random one

    Returns:
        LanczosEstimate; on breakdown the current estimates are returned with
        the breakdown flag set
    """
    if iters < 1:
        raise DomainError(f"Lanczos needs at least one step, got {iters}")
    n = a.n
    iters = min(iters, n)
    if start is None:
        q = np.random.default_rng(seed).standard_normal(n)
    else:
        q = np.array(start, dtype=np.float64)
    aq = a @ q
    norm = np.sqrt(float(q @ aq))
    if not norm > 0.0:
        raise DomainError("Lanczos start vector has zero A-norm")
    q /= norm
    aq /= norm

    basis, a_basis = [q], [aq]
    alphas, betas = [], []
    breakdown = False
    for j in range(iters):
        w = apply_binv(a_basis[j])
        alpha = float(w @ a_basis[j])
        alphas.append(alpha)
        if j + 1 == iters:
            break
        # Two passes of classical Gram-Schmidt in the A-inner product
        for _ in range(2):
            for qi, aqi in zip(basis, a_basis):
                w -= (aqi @ w) * qi
        aw = a @ w
        beta = np.sqrt(max(float(w @ aw), 0.0))
        if beta <= BREAKDOWN_TOL * max(abs(alpha), 1e-300):
            breakdown = True
            break
        betas.append(beta)
        basis.append(w / beta)
        a_basis.append(aw / beta)

    ritz = sla.eigh_tridiagonal(np.array(alphas), np.array(betas), eigvals_only=True)
    estimate = LanczosEstimate(
        nu_min=float(ritz[0]),
        nu_max=float(ritz[-1]),
        iterations=len(alphas),
        breakdown=breakdown,
    )
    logger.debug(
        "Lanczos: %d steps, nu_min~%.6g nu_max~%.6g%s",
        estimate.iterations, estimate.nu_min, estimate.nu_max,
        " (breakdown)" if breakdown else "",
    )
    return estimate
