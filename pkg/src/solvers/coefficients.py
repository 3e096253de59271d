"""Acceleration coefficients from the convexity and smoothness constants."""
import math
from dataclasses import dataclass

from ..config import KAPPA_FLOOR
from ..exceptions import CoefficientError, DomainError

COEFFICIENT_VARIANTS = ("algorithm", "closed_form")


@dataclass(frozen=True)
class AccelCoefficients:
    """Momentum coefficients for condition number κ = L/μ.

    Attributes:
        mu: Geodesic strong-convexity constant
        ell: Geodesic smoothness constant
        kappa: ell / mu
        alpha, beta, gamma, gamma_bar: Recurrence weights, γ̄ = (1 + β)γ
    """

    mu: float
    ell: float
    kappa: float
    alpha: float
    beta: float
    gamma: float
    gamma_bar: float

    def __post_init__(self):
        if self.kappa < KAPPA_FLOOR or not self.beta > 0.0:
            raise CoefficientError(self.kappa)
        if not (0.0 < self.alpha < 1.0):
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not math.isclose(self.gamma_bar, (1.0 + self.beta) * self.gamma, rel_tol=1e-14):
            raise DomainError("gamma_bar must equal (1 + beta)·gamma")

    @property
    def y_weight(self) -> float:
        """α/(α + β + 1): fraction of the x→v geodesic taken by the y-update."""
        return self.alpha / (self.alpha + self.beta + 1.0)

    @property
    def gradient_weight(self) -> float:
        """α/((1 + β)γ) = α/γ̄: step length on the preconditioned gradient."""
        return self.alpha / self.gamma_bar

    @property
    def momentum_weight(self) -> float:
        """(1 − α)/(1 + β): weight on log_y(v) in the v-update."""
        return (1.0 - self.alpha) / (1.0 + self.beta)


def compute_coefficients(mu: float, ell: float, variant: str = "algorithm") -> AccelCoefficients:
    """
    Closed-form coefficients for κ = L/μ ≥ 9.

    β = 3/(2√κ − 4). The "algorithm" variant takes the largest admissible
    α = (√(β² + 4(1 + β)/κ) − β)/2; "closed_form" takes α = 1/(2√κ).
    In both, γ = αμ/(α + β) and γ̄ = (1 + β)γ.

    Raises:
        DomainError: If not 0 < mu ≤ ell, or the variant is unknown
        CoefficientError: If κ < 9
    """
    if not (0.0 < mu <= ell):
        raise DomainError(f"need 0 < mu <= L, got mu={mu}, L={ell}")
    if variant not in COEFFICIENT_VARIANTS:
        raise DomainError(f"variant must be one of {COEFFICIENT_VARIANTS}, got {variant!r}")
    kappa = ell / mu
    if kappa < KAPPA_FLOOR:
        raise CoefficientError(kappa)

    root = math.sqrt(kappa)
    beta = 3.0 / (2.0 * root - 4.0)
    if variant == "algorithm":
        alpha = (math.sqrt(beta ** 2 + 4.0 * (1.0 + beta) / kappa) - beta) / 2.0
    else:
        alpha = 1.0 / (2.0 * root)
    gamma = alpha * mu / (alpha + beta)
    return AccelCoefficients(
        mu=mu,
        ell=ell,
        kappa=kappa,
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        gamma_bar=(1.0 + beta) * gamma,
    )


def rate_bound(kappa: float, m: int) -> float:
    """Gap factor 2(1 − 1/(2√κ))^m after m accelerated iterations."""
    return 2.0 * (1.0 - 1.0 / (2.0 * math.sqrt(kappa))) ** m


def initial_gap_admissible(f0: float, lambda1: float, rho_x: float, kappa: float) -> bool:
    """True if f(x₀) − λ₁ ≤ (ρ_X − λ₁)/(22(1 + 2√κ)²κ)."""
    return f0 - lambda1 <= (rho_x - lambda1) / (22.0 * (1.0 + 2.0 * math.sqrt(kappa)) ** 2 * kappa)
