"""Dense eigendata shared by the diagnostics.

Every diagnostic works on small problems with an explicit preconditioner B,
so A, M and B are held as dense arrays together with the full eigensystem
of (A, M).
"""
import logging
from functools import cached_property
from typing import Optional, Tuple

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
from numpy.typing import NDArray

from ..config import DIAGNOSTICS_MAX_DIM
from ..exceptions import DimensionMismatchError, DomainError, MatrixError
from ..linalg.pencil import SpdMatrix
from ..utils import check_dense_size_limit

logger = logging.getLogger(__name__)

Array = NDArray[np.float64]


def to_dense(matrix) -> Array:
    """Dense copy of an SpdMatrix, a scipy sparse matrix or an array."""
    if isinstance(matrix, SpdMatrix):
        return matrix.toarray()
    if sp.issparse(matrix):
        return matrix.toarray()
    return np.array(matrix, dtype=np.float64)


def complement_basis(c: Array) -> Array:
    """Orthonormal basis of {v : vᵀc = 0} from a Householder reflector."""
    norm = np.linalg.norm(c)
    if norm == 0.0:
        raise DomainError("Cannot deflate against a zero vector")
    u = c / norm
    w = u.copy()
    w[0] += 1.0 if u[0] >= 0.0 else -1.0
    w /= np.linalg.norm(w)
    reflector = np.eye(c.shape[0]) - 2.0 * np.outer(w, w)
    return reflector[:, 1:]


class DenseProblem:
    """
    Dense pencil (A, M) with an optional explicit preconditioner B.

    Args:
        a, m: SPD matrices of the pencil
        b: Explicit SPD preconditioner (needed by the B-dependent measures)
        max_dim: Dense dimension limit
    """

    def __init__(self, a, m, b=None, max_dim: int = DIAGNOSTICS_MAX_DIM):
        self.a = to_dense(a)
        self.m = to_dense(m)
        self.n = self.a.shape[0]
        check_dense_size_limit(self.n, max_dim)
        if self.m.shape != self.a.shape:
            raise DimensionMismatchError(self.n, self.m.shape[0], "mass matrix")
        self.b = None if b is None else to_dense(b)
        if self.b is not None and self.b.shape != self.a.shape:
            raise DimensionMismatchError(self.n, self.b.shape[0], "preconditioner")
        try:
            self.values, self.vectors = sla.eigh(self.a, self.m)
        except sla.LinAlgError as e:
            raise MatrixError(f"Pencil is not positive definite: {e}") from e
        if self.n < 2:
            raise DomainError("Diagnostics need at least two eigenvalues")

    @property
    def lambda1(self) -> float:
        return float(self.values[0])

    @property
    def lambda2(self) -> float:
        return float(self.values[1])

    @property
    def lambdan(self) -> float:
        return float(self.values[-1])

    @cached_property
    def u1(self) -> Array:
        """M-unit smallest eigenvector with nonnegative component sum."""
        u = self.vectors[:, 0].copy()
        u /= np.sqrt(u @ self.m @ u)
        return -u if u.sum() < 0.0 else u

    def require_b(self) -> Array:
        if self.b is None:
            raise DomainError("This diagnostic needs an explicit preconditioner B")
        return self.b

    def check_rho_star(self, rho_star: float) -> None:
        """Raise DomainError unless λ₁ ≤ ρ* < (λ₁ + λ₂)/2."""
        if not (self.lambda1 * (1.0 - 1e-12) <= rho_star < 0.5 * (self.lambda1 + self.lambda2)):
            raise DomainError(
                f"rho_star={rho_star:.6g} must lie in [lambda1, (lambda1 + lambda2)/2) = "
                f"[{self.lambda1:.6g}, {0.5 * (self.lambda1 + self.lambda2):.6g})"
            )

    def rayleigh(self, points: Array) -> Array:
        """Rayleigh quotients of the columns of points (or of one vector)."""
        points = np.atleast_2d(points.T).T
        num = np.einsum("ij,ij->j", points, self.a @ points)
        den = np.einsum("ij,ij->j", points, self.m @ points)
        return num / den

    @cached_property
    def nu_values(self) -> Array:
        """Eigenvalues of the pencil (A, B)."""
        return sla.eigh(self.a, self.require_b(), eigvals_only=True)

    @cached_property
    def a_sqrt(self) -> Tuple[Array, Array]:
        """(A^{1/2}, A^{-1/2}) from the spectral decomposition of A."""
        w, q = np.linalg.eigh(self.a)
        if w[0] <= 0.0:
            raise MatrixError("A is not positive definite")
        root = np.sqrt(w)
        return (q * root) @ q.T, (q / root) @ q.T

    def deflated_extremes(self, c: Array) -> Tuple[float, float]:
        """Minimum and maximum of f over {v ≠ 0 : vᵀc = 0}."""
        q = complement_basis(c)
        a_c = q.T @ self.a @ q
        m_c = q.T @ self.m @ q
        values = sla.eigh(0.5 * (a_c + a_c.T), 0.5 * (m_c + m_c.T), eigvals_only=True)
        return float(values[0]), float(values[-1])


def as_problem(a, m, b=None, problem: Optional[DenseProblem] = None) -> DenseProblem:
    """Reuse an existing DenseProblem or build one."""
    if problem is not None:
        return problem
    return DenseProblem(a, m, b)
