"""Preconditioner quality measures.

Besides the global condition number κ_ν of B⁻¹A, the local measures near
the smallest eigenvector u₁ are estimated on the sublevel set {f ≤ ρ*}:

- the leading angle ϑ: cos ϑ is the largest A-cosine between a point x of
  the set and a direction B-orthogonal to x;
- ϱ: the smallest Rayleigh quotient over those B-orthogonal directions;
- ς: the spread of xᵀAx/xᵀBx around σ = u₁ᵀAu₁/u₁ᵀBu₁.

The inner optimizations are solved exactly per point; the outer ones run
over a deterministic sample of the set.
"""
import logging
import math
from dataclasses import asdict, dataclass
from typing import Optional, Tuple

import numpy as np
import scipy.linalg as sla

from ..config import (
    DEFAULT_SEED,
    DIAGNOSTICS_LANCZOS_ITERS,
    ESTIMATE_SLACK,
    SAMPLE_BOUNDARY_SHRINK,
    SAMPLING_DIRECTIONS,
    SAMPLING_RADII,
)
from ..exceptions import DomainError, EstimationError, MatrixError
from ..linalg.lanczos import extremal_pencil_eigs
from ..linalg.pencil import SpdMatrix, as_vector
from ..precond.base import PreconditionerHandle
from .dense import Array, DenseProblem, as_problem, to_dense

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PreconQuality:
    """Quality measures of a preconditioner B at level ρ*.

    Attributes:
        kappa_nu: ν_max/ν_min of (A, B)
        cos_theta_est: Sampled lower bound on cos ϑ
        varrho_est: Sampled upper bound on ϱ
        varsigma_est: Sampled lower bound on ς
        sigma: u₁ᵀAu₁/u₁ᵀBu₁
        nu1: u₁ᵀAB⁻¹Au₁/u₁ᵀAu₁
        rho_star: Level of the sublevel set
        sample_count: Number of admissible sample points

        # Side values
        nu_min, nu_max: Extreme eigenvalues of (A, B)
        lambda1, lambda2, lambdan: Eigenvalues of (A, M)
        epsilon: √((ρ* − λ₁)/(λ₂ − λ₁))
        epsilon_star: λ₂ cos ϑ/(λ₂ − λ₁) + ε
        decomposition_bound: Exact-constant upper bound on cos ϑ from u₁ data
        varrho_lower_bound: Lower bound on ϱ implied by cos_theta_est
        admissible: True if cos²ϑ is small enough to guarantee ϱ > ρ*

        # Ratios against the order-of-magnitude forms (recorded only)
        cos_ratio, varrho_ratio, varsigma_ratio
    """

    kappa_nu: float
    cos_theta_est: float
    varrho_est: float
    varsigma_est: float
    sigma: float
    nu1: float
    rho_star: float
    sample_count: int

    # Side values
    nu_min: float = float("nan")
    nu_max: float = float("nan")
    lambda1: float = float("nan")
    lambda2: float = float("nan")
    lambdan: float = float("nan")
    epsilon: float = float("nan")
    epsilon_star: float = float("nan")
    decomposition_bound: float = float("nan")
    varrho_lower_bound: float = float("nan")
    admissible: bool = False

    # Ratios against the order-of-magnitude forms (recorded only)
    cos_ratio: float = float("nan")
    varrho_ratio: float = float("nan")
    varsigma_ratio: float = float("nan")

    def __post_init__(self):
        if not (-ESTIMATE_SLACK <= self.cos_theta_est <= 1.0 + ESTIMATE_SLACK):
            raise EstimationError(f"cos_theta_est out of [0, 1]: {self.cos_theta_est}")
        if self.kappa_nu < 1.0 - 1e-10:
            raise EstimationError(f"kappa_nu below 1: {self.kappa_nu}")

    @property
    def satisfies_kappa_bound(self) -> bool:
        """cos ϑ ≤ √(κ_ν − 1) up to ESTIMATE_SLACK."""
        return self.cos_theta_est <= math.sqrt(max(self.kappa_nu - 1.0, 0.0)) + ESTIMATE_SLACK

    def to_dict(self) -> dict:
        return asdict(self)


def kappa_nu(a: SpdMatrix, pc: PreconditionerHandle, iters: int = DIAGNOSTICS_LANCZOS_ITERS, seed: int = DEFAULT_SEED) -> float:
    """
    κ_ν = ν_max/ν_min of B⁻¹A from Lanczos estimates.

    A Lanczos breakdown means the Krylov space is invariant; the estimates
    are then exact on it and are returned as they are.
    """
    estimate = extremal_pencil_eigs(a, pc.apply, iters=iters, seed=seed)
    if estimate.breakdown:
        logger.info("kappa_nu: Lanczos breakdown after %d steps", estimate.iterations)
    return max(estimate.kappa, 1.0)


def _leading_cos_columns(a_half: Array, a_inv_half: Array, b: Array, points: Array) -> Array:
    ahat = a_half @ points
    bhat = a_inv_half @ (b @ points)
    ahat /= np.linalg.norm(ahat, axis=0)
    bhat /= np.linalg.norm(bhat, axis=0)
    dots = np.einsum("ij,ij->j", ahat, bhat)
    return np.sqrt(np.clip(1.0 - dots ** 2, 0.0, 1.0))


def per_point_leading_cos(a, b_explicit, x) -> float:
    """
    max |vᵀAx|/(‖v‖_A‖x‖_A) over v ≠ 0 with vᵀBx = 0.

    Closed form √(1 − (âᵀb̂)²) with â ∝ A^{1/2}x and b̂ ∝ A^{-1/2}Bx.

    Raises:
        DomainError: If x is zero
        MatrixError: If A is not positive definite
    """
    a_dense = to_dense(a)
    b_dense = to_dense(b_explicit)
    x = as_vector(x, a_dense.shape[0], "x")
    if not np.any(x):
        raise DomainError("x must be nonzero")
    w, q = np.linalg.eigh(a_dense)
    if w[0] <= 0.0:
        raise MatrixError("A is not positive definite")
    root = np.sqrt(w)
    a_half, a_inv_half = (q * root) @ q.T, (q / root) @ q.T
    return float(_leading_cos_columns(a_half, a_inv_half, b_dense, x[:, None])[0])


def sublevel_samples(
    problem: DenseProblem,
    rho_star: float,
    directions: int = SAMPLING_DIRECTIONS,
    radii: int = SAMPLING_RADII,
    seed: int = DEFAULT_SEED,
) -> Array:
    """
    Deterministic sample of {x : ‖x‖_M = 1, xᵀMu₁ ≥ 0, f(x) ≤ ρ*}.

    Points x = cos r·u₁ + sin r·w for random M-unit w ⊥_M u₁, with r swept
    over radii equal steps up to the boundary radius of direction w. u₁
    itself is the first column.

    Returns:
        n×k array of admissible points as columns

    Raises:
        DomainError: Unless λ₁ ≤ ρ* < (λ₁ + λ₂)/2
        EstimationError: If no sample is admissible
    """
    problem.check_rho_star(rho_star)
    u1, m = problem.u1, problem.m
    rng = np.random.default_rng(seed)
    w = rng.standard_normal((problem.n, directions))
    w -= np.outer(u1, u1 @ (m @ w))
    w /= np.sqrt(np.einsum("ij,ij->j", w, m @ w))

    excess = np.maximum(problem.rayleigh(w) - problem.lambda1, np.finfo(float).tiny)
    share = np.clip((rho_star - problem.lambda1) / excess, 0.0, 1.0)
    boundary = np.arcsin(np.sqrt(share)) * (1.0 - SAMPLE_BOUNDARY_SHRINK)
    steps = np.arange(1, radii + 1) / radii
    r = (steps[:, None] * boundary[None, :]).ravel()
    direction = np.tile(np.arange(directions), radii)
    points = np.outer(u1, np.cos(r)) + w[:, direction] * np.sin(r)
    points = np.column_stack([u1, points])

    keep = problem.rayleigh(points) <= rho_star * (1.0 + 1e-12)
    if not np.any(keep):
        raise EstimationError(f"No admissible samples at rho_star={rho_star:.6g}")
    logger.debug("Sampled %d of %d points in the sublevel set", int(keep.sum()), keep.size)
    return points[:, keep]


def _resolve_points(problem: DenseProblem, rho_star: float, samples: int, seed: int, points: Optional[Array]) -> Array:
    if points is None:
        return sublevel_samples(problem, rho_star, directions=samples, seed=seed)
    points = np.atleast_2d(np.asarray(points, dtype=np.float64).T).T
    if points.shape[1] == 0:
        raise EstimationError("Empty sample set")
    return points


def leading_angle_estimate(
    a,
    m,
    b_explicit,
    rho_star: float,
    samples: int = SAMPLING_DIRECTIONS,
    seed: int = DEFAULT_SEED,
    points: Optional[Array] = None,
    problem: Optional[DenseProblem] = None,
) -> float:
    """
    Lower bound on cos ϑ: the maximum of per_point_leading_cos over a sample
    of the sublevel set (or over the given points).

    Args:
        a, m: Pencil matrices
        b_explicit: Explicit preconditioner B
        rho_star: Level λ₁ ≤ ρ* < (λ₁ + λ₂)/2
        samples: Random directions per radius
        seed: Sampling seed
        points: Precomputed sample points (columns), overriding the sampler
        problem: Reusable dense eigendata
    """
    problem = as_problem(a, m, b_explicit, problem)
    pts = _resolve_points(problem, rho_star, samples, seed, points)
    a_half, a_inv_half = problem.a_sqrt
    return float(_leading_cos_columns(a_half, a_inv_half, problem.require_b(), pts).max())


def _nu1(problem: DenseProblem) -> Tuple[float, Array]:
    """ν₁ and the preconditioned image B⁻¹Au₁."""
    au1 = problem.a @ problem.u1
    image = sla.solve(problem.require_b(), au1, assume_a="pos")
    return float(au1 @ image) / float(problem.u1 @ au1), image


def varrho_varsigma_estimate(
    a,
    m,
    b_explicit,
    rho_star: float,
    samples: int = SAMPLING_DIRECTIONS,
    seed: int = DEFAULT_SEED,
    points: Optional[Array] = None,
    problem: Optional[DenseProblem] = None,
) -> Tuple[float, float, float, float]:
    """
    Sampled (ϱ, ς) with σ and ν₁.

    For each sample x the inner infimum of f over the B-orthogonal complement
    of x is solved exactly; ϱ_est is their minimum, an upper bound on ϱ.
    ς_est = max |xᵀAx/xᵀBx − σ|, a lower bound on ς.

    Returns:
        (varrho_est, varsigma_est, sigma, nu1)
    """
    problem = as_problem(a, m, b_explicit, problem)
    b = problem.require_b()
    pts = _resolve_points(problem, rho_star, samples, seed, points)

    varrho = min(problem.deflated_extremes(b @ pts[:, j])[0] for j in range(pts.shape[1]))
    u1 = problem.u1
    sigma = float(u1 @ problem.a @ u1) / float(u1 @ b @ u1)
    ratios = np.einsum("ij,ij->j", pts, problem.a @ pts) / np.einsum("ij,ij->j", pts, b @ pts)
    varsigma = float(np.max(np.abs(ratios - sigma)))
    nu1, _ = _nu1(problem)
    return float(varrho), varsigma, sigma, nu1


def decomposition_bound(problem: DenseProblem, rho_star: float) -> float:
    """
    Upper bound on cos ϑ from the action of B⁻¹A on u₁:

        ‖B⁻¹Aũ₁ − ν₁ũ₁‖_A/ν_min + (ν₁/ν_min + √κ_ν)·√((λ₁⁻¹ − ρ*⁻¹)/(λ₁⁻¹ − λ₂⁻¹))

    with ũ₁ the A-unit smallest eigenvector.
    """
    nu1, image = _nu1(problem)
    scale = math.sqrt(float(problem.u1 @ problem.a @ problem.u1))
    defect = (image - nu1 * problem.u1) / scale
    defect_norm = math.sqrt(max(float(defect @ problem.a @ defect), 0.0))
    nu = problem.nu_values
    nu_min, kappa = float(nu[0]), float(nu[-1] / nu[0])
    lam1, lam2 = problem.lambda1, problem.lambda2
    share = max((1.0 / lam1 - 1.0 / rho_star) / (1.0 / lam1 - 1.0 / lam2), 0.0)
    return defect_norm / nu_min + (nu1 / nu_min + math.sqrt(kappa)) * math.sqrt(share)


def varrho_lower_bound(cos_theta: float, lambda1: float, lambda2: float, rho_star: float) -> float:
    """1/(λ₂⁻¹ + 2(λ₁⁻¹ − λ₂⁻¹)cos²ϑ + 2(λ₁⁻¹ − ρ*⁻¹))."""
    inv = 1.0 / lambda2 + 2.0 * (1.0 / lambda1 - 1.0 / lambda2) * cos_theta ** 2
    inv += 2.0 * (1.0 / lambda1 - 1.0 / rho_star)
    return 1.0 / inv


def admissibility(cos_theta: float, lambda1: float, lambda2: float, rho_star: float) -> bool:
    """True if cos²ϑ ≤ (3ρ*⁻¹ − 2λ₁⁻¹ − λ₂⁻¹)/(2(λ₁⁻¹ − λ₂⁻¹)), which forces ϱ > ρ*."""
    limit = (3.0 / rho_star - 2.0 / lambda1 - 1.0 / lambda2) / (2.0 * (1.0 / lambda1 - 1.0 / lambda2))
    return cos_theta ** 2 <= limit


def _ratio(num: float, den: float) -> float:
    return num / den if den > 0.0 else float("nan")


def estimate_precon_quality(
    a,
    m,
    b_explicit,
    rho_star: float,
    samples: int = SAMPLING_DIRECTIONS,
    seed: int = DEFAULT_SEED,
    points: Optional[Array] = None,
    problem: Optional[DenseProblem] = None,
) -> PreconQuality:
    """
    All quality measures at level ρ* from one shared sample.

    ν_min and ν_max are computed densely, so κ_ν is exact.

    Raises:
        DomainError: Unless λ₁ ≤ ρ* < (λ₁ + λ₂)/2
        EstimationError: If no sample is admissible
    """
    problem = as_problem(a, m, b_explicit, problem)
    pts = _resolve_points(problem, rho_star, samples, seed, points)
    cos_theta = leading_angle_estimate(a, m, b_explicit, rho_star, points=pts, problem=problem)
    varrho, varsigma, sigma, nu1 = varrho_varsigma_estimate(a, m, b_explicit, rho_star, points=pts, problem=problem)

    nu = problem.nu_values
    nu_min, nu_max = float(nu[0]), float(nu[-1])
    lam1, lam2 = problem.lambda1, problem.lambda2
    epsilon = math.sqrt(max((rho_star - lam1) / (lam2 - lam1), 0.0))
    epsilon_star = lam2 * cos_theta / (lam2 - lam1) + epsilon
    bound = decomposition_bound(problem, rho_star)
    defect_term = bound - (nu1 / nu_min + math.sqrt(nu_max / nu_min)) * math.sqrt(
        max((1.0 / lam1 - 1.0 / rho_star) / (1.0 / lam1 - 1.0 / lam2), 0.0)
    )

    quality = PreconQuality(
        kappa_nu=nu_max / nu_min,
        cos_theta_est=cos_theta,
        varrho_est=varrho,
        varsigma_est=varsigma,
        sigma=sigma,
        nu1=nu1,
        rho_star=rho_star,
        sample_count=pts.shape[1],
        nu_min=nu_min,
        nu_max=nu_max,
        lambda1=lam1,
        lambda2=lam2,
        lambdan=problem.lambdan,
        epsilon=epsilon,
        epsilon_star=epsilon_star,
        decomposition_bound=bound,
        varrho_lower_bound=varrho_lower_bound(cos_theta, lam1, lam2, rho_star),
        admissible=admissibility(cos_theta, lam1, lam2, rho_star),
        cos_ratio=_ratio(cos_theta, math.sqrt(nu_max / nu_min) * epsilon + defect_term + nu1 * epsilon / nu_min),
        varrho_ratio=_ratio((lam2 - varrho) / (lam2 - lam1), cos_theta ** 2 + epsilon ** 2),
        varsigma_ratio=_ratio(varsigma, sigma ** 2 * epsilon_star ** 2 / nu_min),
    )
    logger.info(
        "Quality at rho*=%.6g: kappa_nu=%.4g cos=%.4g varrho=%.6g varsigma=%.4g (%d samples)",
        rho_star, quality.kappa_nu, cos_theta, varrho, varsigma, quality.sample_count,
    )
    return quality
