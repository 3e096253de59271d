"""Rayleigh-Ritz projection onto a small subspace."""
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg as sla
from numpy.typing import NDArray

from ..config import QR_DROP_TOL
from ..exceptions import DegenerateBasisError, DomainError
from .pencil import DenseVector, MatrixPencil, as_vector


@dataclass
class RitzResult:
    """Smallest Ritz pair of a pencil restricted to span(basis).

    Attributes:
        value: Smallest Ritz value
        vector: Ritz vector, M-normalized
        coeffs: vector = Σ coeffs[i]·basis[i]; dropped columns get 0
        rank: Number of basis columns kept after the rank test
    """

    value: float
    vector: DenseVector
    coeffs: NDArray[np.float64]
    rank: int


def rayleigh_ritz(basis: Sequence[DenseVector], p: MatrixPencil, drop_tol: float = QR_DROP_TOL) -> RitzResult:
    """
    Minimize the Rayleigh quotient of p over span(basis).

    The basis is orthonormalized by a column-pivoted QR; columns whose
    diagonal entry of R falls below drop_tol·|R₀₀| are dropped. The projected
    pencil is solved densely and the minimizer is reported both as a vector
    and as coeffs in the original basis, so that co-iterated twins can
    be assembled with the same coeffs.

    Args:
        basis: k ≥ 1 vectors of length n
        p: Pencil (A, M)
        drop_tol: Relative rank tolerance

    Returns:
        RitzResult with the smallest Ritz value

    Raises:
        DegenerateBasisError: If every column is numerically zero
    """
    if len(basis) == 0:
        raise DomainError("Rayleigh-Ritz needs at least one basis vector")
    v = np.column_stack([as_vector(b, p.n, "basis vector") for b in basis])
    k = v.shape[1]

    q, r, piv = sla.qr(v, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    if diag.size == 0 or not diag[0] > 0.0:
        raise DegenerateBasisError("All basis vectors are zero")
    rank = int(np.count_nonzero(diag > drop_tol * diag[0]))
    q = q[:, :rank]

    a_small = q.T @ (p.a @ q)
    m_small = q.T @ (p.m @ q)
    a_small = 0.5 * (a_small + a_small.T)
    m_small = 0.5 * (m_small + m_small.T)
    values, vectors = sla.eigh(a_small, m_small, subset_by_index=[0, 0])
    c = vectors[:, 0]

    z = sla.solve_triangular(r[:rank, :rank], c)
    coeffs = np.zeros(k)
    coeffs[piv[:rank]] = z

    # Deterministic sign: first kept column in original order gets a nonnegative weight
    lead = int(np.min(piv[:rank]))
    if coeffs[lead] < 0.0:
        coeffs = -coeffs
        c = -c

    return RitzResult(
        value=float(values[0]),
        vector=q @ c,
        coeffs=coeffs,
        rank=rank,
    )
