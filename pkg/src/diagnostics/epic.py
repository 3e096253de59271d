"""Eigenvalue-perturbation inequality checks near the smallest eigenvector.

For x with ρ = f(x) in [λ₁, (λ₁ + λ₂)/2):

    pair_cosine    |xᵀMu₁|/(‖x‖_M‖u₁‖_M) ≥ 1 − 2(ρ − λ₁)/(λ₂ − λ₁)
    m_angle        (xᵀMu₁)²/(‖x‖²_M‖u₁‖²_M) ≥ (λ₂ − ρ)/(λ₂ − λ₁)
    a_angle        (xᵀAu₁)²/(‖x‖²_A‖u₁‖²_A) ≥ (ρ⁻¹ − λ₂⁻¹)/(λ₁⁻¹ − λ₂⁻¹)
    complement     λ₁ + λ₂ − ρ ≤ f(v) ≤ λ_n for every v ⊥_M x
    residual       rᵀA⁻¹r/xᵀMx ≤ ρ(ρ − λ₁)/λ₁,  r = Ax − ρMx

Margins are (bound side − measured side) with the sign arranged so that a
satisfied inequality has a nonnegative margin.
"""
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np
import scipy.linalg as sla

from ..config import EPIC_SLACK
from ..exceptions import DomainError
from ..linalg.pencil import MatrixPencil, as_vector
from .dense import DenseProblem

EPIC_CHECKS = ("pair_cosine", "m_angle", "a_angle", "complement_lower", "complement_upper", "residual")


@dataclass
class EpicReport:
    """Outcome of the inequality checks at one point.

    Attributes:
        rho: f(x)
        margins: Margin per check, nonnegative when satisfied
        scales: Magnitude each margin is compared against
    """

    rho: float
    margins: Dict[str, float] = field(default_factory=dict)
    scales: Dict[str, float] = field(default_factory=dict)

    def holds(self, check: str, slack: float = EPIC_SLACK) -> bool:
        return self.margins[check] >= -slack * max(1.0, self.scales.get(check, 1.0))

    @property
    def satisfied(self) -> Dict[str, bool]:
        return {name: self.holds(name) for name in self.margins}

    @property
    def all_hold(self) -> bool:
        return all(self.satisfied.values())

    @property
    def violations(self) -> list:
        return [name for name, ok in self.satisfied.items() if not ok]


def epic_check(
    p: MatrixPencil,
    x,
    rho_star: Optional[float] = None,
    problem: Optional[DenseProblem] = None,
) -> EpicReport:
    """
    Evaluate the inequalities at x against dense eigendata.

    The complement check uses the exact extremes of f over {v : vᵀMx = 0}.

    Args:
        p: Pencil (A, M)
        x: Nonzero point
        rho_star: Optional level; f(x) ≤ rho_star is then required too
        problem: Reusable dense eigendata of p

    Raises:
        DomainError: If x is zero or f(x) is outside [λ₁, (λ₁ + λ₂)/2)
    """
    problem = problem or DenseProblem(p.a, p.m)
    x = as_vector(x, problem.n, "x")
    if not np.any(x):
        raise DomainError("x must be nonzero")
    a, m, u1 = problem.a, problem.m, problem.u1
    lam1, lam2, lamn = problem.lambda1, problem.lambda2, problem.lambdan

    ax, mx = a @ x, m @ x
    x_m2 = float(x @ mx)
    x_a2 = float(x @ ax)
    rho = x_a2 / x_m2
    level = rho if rho_star is None else rho_star
    if rho > level * (1.0 + 1e-12):
        raise DomainError(f"f(x)={rho:.6g} exceeds rho_star={level:.6g}")
    problem.check_rho_star(level)
    f_x = rho
    rho = max(rho, lam1)

    report = EpicReport(rho=rho)
    mu = float(x @ (m @ u1))
    au = float(x @ (a @ u1))
    cos_m = abs(mu) / np.sqrt(x_m2)
    report.margins["pair_cosine"] = cos_m - (1.0 - 2.0 * (rho - lam1) / (lam2 - lam1))
    report.margins["m_angle"] = mu ** 2 / x_m2 - (lam2 - rho) / (lam2 - lam1)
    report.margins["a_angle"] = au ** 2 / (x_a2 * lam1) - (1.0 / rho - 1.0 / lam2) / (1.0 / lam1 - 1.0 / lam2)

    low, high = problem.deflated_extremes(mx)
    report.margins["complement_lower"] = low - (lam1 + lam2 - rho)
    report.margins["complement_upper"] = lamn - high
    report.scales["complement_lower"] = lamn
    report.scales["complement_upper"] = lamn

    r = ax - f_x * mx
    measured = float(r @ sla.solve(a, r, assume_a="pos")) / x_m2
    bound = rho * (rho - lam1) / lam1
    report.margins["residual"] = bound - measured
    report.scales["residual"] = rho
    return report
