"""Sparse SPD matrices and generalized eigenvalue pencils.

SpdMatrix stores the full symmetric pattern in CSR form so that matrix-vector
products need no transpose handling.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp
from numpy.typing import NDArray

from ..config import SYMMETRY_TOL
from ..exceptions import DimensionMismatchError, DomainError, MatrixError

DenseVector = NDArray[np.float64]


def as_vector(x, n: Optional[int] = None, name: str = "vector") -> DenseVector:
    """
    Convert to a finite float64 vector of the expected length.

    Raises:
        DimensionMismatchError: If the length differs from n
        DomainError: If x is not one-dimensional or has non-finite entries
    """
    v = np.asarray(x, dtype=np.float64)
    if v.ndim != 1:
        raise DomainError(f"{name} must be one-dimensional, got shape {v.shape}")
    if n is not None and v.shape[0] != n:
        raise DimensionMismatchError(n, v.shape[0], name)
    if not np.all(np.isfinite(v)):
        raise DomainError(f"{name} has non-finite entries")
    return v


class SpdMatrix:
    """Symmetric positive definite matrix in CSR storage.

    Positive definiteness is not verified on construction (it would cost a
    factorization); it is checked by the factorizations that need it.
    """

    def __init__(self, matrix, check_symmetry: bool = True):
        csr = sp.csr_matrix(matrix, dtype=np.float64)
        if csr.shape[0] != csr.shape[1]:
            raise MatrixError(f"Matrix must be square, got shape {csr.shape}")
        csr.sum_duplicates()
        csr.sort_indices()
        if check_symmetry:
            _check_symmetric(csr)
        self._csr = csr

    @classmethod
    def from_dense(cls, array) -> "SpdMatrix":
        return cls(sp.csr_matrix(np.asarray(array, dtype=np.float64)))

    @classmethod
    def identity(cls, n: int) -> "SpdMatrix":
        return cls(sp.identity(n, format="csr"), check_symmetry=False)

    @property
    def n(self) -> int:
        return self._csr.shape[0]

    @property
    def csr(self) -> sp.csr_matrix:
        return self._csr

    @property
    def indptr(self) -> NDArray[np.int32]:
        return self._csr.indptr

    @property
    def indices(self) -> NDArray[np.int32]:
        return self._csr.indices

    @property
    def data(self) -> NDArray[np.float64]:
        return self._csr.data

    @property
    def nnz(self) -> int:
        return self._csr.nnz

    def matvec(self, x) -> DenseVector:
        return self._csr @ as_vector(x, self.n)

    def __matmul__(self, x):
        return self._csr @ x

    def diagonal(self) -> DenseVector:
        return self._csr.diagonal()

    def toarray(self) -> NDArray[np.float64]:
        return self._csr.toarray()

    def submatrix(self, index: NDArray[np.intp]) -> "SpdMatrix":
        """Principal submatrix on a sorted index set."""
        return SpdMatrix(self._csr[index][:, index], check_symmetry=False)

    def scaled(self, alpha: float) -> "SpdMatrix":
        if not alpha > 0.0:
            raise DomainError(f"Scaling factor must be positive, got {alpha}")
        return SpdMatrix(self._csr * alpha, check_symmetry=False)

    def __repr__(self) -> str:
        return f"SpdMatrix(n={self.n}, nnz={self.nnz})"


def _check_symmetric(csr: sp.csr_matrix) -> None:
    diff = csr - csr.T
    scale = abs(csr).max() if csr.nnz else 0.0
    if diff.nnz and abs(diff).max() > SYMMETRY_TOL * max(scale, 1.0):
        raise MatrixError("Matrix is not symmetric")


@dataclass(frozen=True)
class MatrixPencil:
    """Generalized eigenvalue pencil (A, M) with A, M SPD of equal dimension."""

    a: SpdMatrix
    m: SpdMatrix

    def __post_init__(self):
        if self.a.n != self.m.n:
            raise DimensionMismatchError(self.a.n, self.m.n, "mass matrix")

    @classmethod
    def standard(cls, a: SpdMatrix) -> "MatrixPencil":
        """Pencil (A, I)."""
        return cls(a, SpdMatrix.identity(a.n))

    @property
    def n(self) -> int:
        return self.a.n

    def scaled(self, alpha: float) -> "MatrixPencil":
        return MatrixPencil(self.a.scaled(alpha), self.m.scaled(alpha))
