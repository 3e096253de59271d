"""Rayleigh quotient kernels for a pencil (A, M)."""
from typing import Optional

import numpy as np

from ..exceptions import DomainError
from .pencil import DenseVector, MatrixPencil, SpdMatrix, as_vector


def rayleigh_quotient(p: MatrixPencil, x) -> float:
    """
    ρ(x) = xᵀAx / xᵀMx.

    Raises:
        DomainError: If x is the zero vector
        DimensionMismatchError: If len(x) != n
    """
    x = as_vector(x, p.n, "x")
    mx = p.m @ x
    denom = float(x @ mx)
    if not denom > 0.0:
        raise DomainError("Rayleigh quotient of the zero vector")
    return float(x @ (p.a @ x)) / denom


def euclidean_gradient(p: MatrixPencil, x) -> DenseVector:
    """
    ∇ρ(x) = 2/(xᵀMx)·(Ax − ρ(x)Mx).

    The result is Euclidean-orthogonal to x.
    """
    x = as_vector(x, p.n, "x")
    ax = p.a @ x
    mx = p.m @ x
    denom = float(x @ mx)
    if not denom > 0.0:
        raise DomainError("Gradient of the Rayleigh quotient at the zero vector")
    rho = float(x @ ax) / denom
    return (2.0 / denom) * (ax - rho * mx)


def residual(p: MatrixPencil, x, rho: float) -> DenseVector:
    """r = Ax − ρMx."""
    x = as_vector(x, p.n, "x")
    return p.a @ x - rho * (p.m @ x)


def weighted_inner(x, y, w: Optional[SpdMatrix] = None) -> float:
    """
    ⟨x, y⟩_W = xᵀWy, with W = I when w is None.

    Raises:
        DimensionMismatchError: If x, y and W disagree in dimension
    """
    x = as_vector(x, None if w is None else w.n, "x")
    y = as_vector(y, x.shape[0], "y")
    if w is None:
        return float(x @ y)
    return float(x @ (w @ y))


def weighted_norm(x, w: Optional[SpdMatrix] = None) -> float:
    return float(np.sqrt(max(weighted_inner(x, x, w), 0.0)))
