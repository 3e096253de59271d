"""Preconditioner handles.

A preconditioner is only ever used through its inverse action r ↦ B⁻¹r.
The handle records the dimension and a name for logs and reports.
"""
import logging
from typing import Callable

import numpy as np
from numpy.typing import NDArray

from ..config import DIAGNOSTICS_MAX_DIM
from ..exceptions import DomainError
from ..linalg.pencil import DenseVector, SpdMatrix, as_vector
from ..utils import check_dense_size_limit
from .factor import factorize_spd

logger = logging.getLogger(__name__)


class PreconditionerHandle:
    """Inverse action of an SPD preconditioner B.

    Args:
        n: Dimension
        apply: Callable r ↦ B⁻¹r
        name: Short name used in logs and reports
    """

    def __init__(self, n: int, apply: Callable[[DenseVector], DenseVector], name: str = "custom"):
        self.n = n
        self._apply = apply
        self.name = name

    def apply(self, r) -> DenseVector:
        r = as_vector(r, self.n, "residual")
        return np.asarray(self._apply(r), dtype=np.float64).reshape(self.n)

    def __call__(self, r) -> DenseVector:
        return self.apply(r)

    def __repr__(self) -> str:
        return f"PreconditionerHandle(name={self.name!r}, n={self.n})"


def identity_preconditioner(n: int) -> PreconditionerHandle:
    return PreconditionerHandle(n, lambda r: r.copy(), "none")


def jacobi_preconditioner(a: SpdMatrix) -> PreconditionerHandle:
    """B = diag(A)."""
    diag = a.diagonal()
    if not np.all(diag > 0.0):
        raise DomainError("Jacobi preconditioner needs a positive diagonal")
    inv = 1.0 / diag
    return PreconditionerHandle(a.n, lambda r: inv * r, "jacobi")


def exact_preconditioner(a: SpdMatrix) -> PreconditionerHandle:
    """B = A, applied by a sparse factorization."""
    return PreconditionerHandle(a.n, factorize_spd(a), "exact")


def mass_preconditioner(m: SpdMatrix) -> PreconditionerHandle:
    """B = M; turns the preconditioned solvers into their unpreconditioned M-sphere versions."""
    return PreconditionerHandle(m.n, factorize_spd(m), "mass")


def assemble_explicit_inverse(pc: PreconditionerHandle, max_dim: int = DIAGNOSTICS_MAX_DIM) -> NDArray[np.float64]:
    """Dense B⁻¹ from n applications, symmetrized."""
    check_dense_size_limit(pc.n, max_dim)
    columns = np.column_stack([pc.apply(e) for e in np.eye(pc.n)])
    return 0.5 * (columns + columns.T)


def assemble_explicit_b(pc: PreconditionerHandle, max_dim: int = DIAGNOSTICS_MAX_DIM) -> NDArray[np.float64]:
    """Dense B, the inverse of the assembled B⁻¹."""
    binv = assemble_explicit_inverse(pc, max_dim)
    b = np.linalg.inv(binv)
    return 0.5 * (b + b.T)
