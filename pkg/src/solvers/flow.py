"""Invariants of the preconditioned gradient flow dx/dt = −B⁻¹∇f(x).

Along the flow the B-norm of x is conserved and f decreases at the rate
‖∇f‖²_{B⁻¹}. These are evaluated pointwise, as checks on preconditioner
handles and start points.
"""
from dataclasses import dataclass
from typing import Optional

from ..linalg.kernels import euclidean_gradient, rayleigh_quotient
from ..linalg.pencil import MatrixPencil, as_vector
from ..precond.base import PreconditionerHandle


@dataclass(frozen=True)
class FlowInvariants:
    """Pointwise flow quantities.

    Attributes:
        rho: f(x)
        grad_dot_x: ⟨∇f(x), x⟩, zero for every x
        b_norm_rate: d‖x‖²_B/dt = −2⟨∇f, x⟩
        energy_rate: df/dt = −‖∇f‖²_{B⁻¹}
        dissipation_bound: −4ρ²(ρ − λ₁)(λ₂ − ρ)/(κ_ν λ₁ λ₂); energy_rate stays
            below it when ρ < λ₂ (None without eigenvalue data)
        rate_constant: C = 4λ₁(λ₂ − ρ)/(κ_ν λ₂), the exponential decay rate of
            f − λ₁ for a flow started at x
    """

    rho: float
    grad_dot_x: float
    b_norm_rate: float
    energy_rate: float
    dissipation_bound: Optional[float] = None
    rate_constant: Optional[float] = None

    def is_dissipating(self, slack: float = 1e-10) -> bool:
        """True if energy_rate ≤ dissipation_bound up to relative slack."""
        if self.dissipation_bound is None:
            return self.energy_rate <= 0.0
        return self.energy_rate <= self.dissipation_bound + slack * abs(self.dissipation_bound)


def gradient_flow_invariants(
    p: MatrixPencil,
    pc: PreconditionerHandle,
    x,
    lambda1: Optional[float] = None,
    lambda2: Optional[float] = None,
    kappa_nu: Optional[float] = None,
) -> FlowInvariants:
    """
    Evaluate the flow invariants at x.

    Args:
        p: Pencil (A, M)
        pc: Preconditioner B⁻¹
        x: Point, not necessarily normalized
        lambda1, lambda2: Smallest eigenvalues of (A, M), for the rate terms
        kappa_nu: Condition number of B⁻¹A, for the rate terms
    """
    x = as_vector(x, p.n, "x")
    rho = rayleigh_quotient(p, x)
    grad = euclidean_gradient(p, x)
    grad_dot_x = float(grad @ x)
    energy_rate = -float(grad @ pc.apply(grad))

    bound = constant = None
    if lambda1 is not None and lambda2 is not None and kappa_nu is not None:
        bound = -4.0 * rho ** 2 * (rho - lambda1) * (lambda2 - rho) / (kappa_nu * lambda1 * lambda2)
        constant = 4.0 * lambda1 * (lambda2 - rho) / (kappa_nu * lambda2)
    return FlowInvariants(
        rho=rho,
        grad_dot_x=grad_dot_x,
        b_norm_rate=-2.0 * grad_dot_x,
        energy_rate=energy_rate,
        dissipation_bound=bound,
        rate_constant=constant,
    )
