"""Dense reference eigensolver for small pencils."""
import logging
from typing import Tuple

import numpy as np
import scipy.linalg as sla
from numpy.typing import NDArray

from ..config import DENSE_ORACLE_MAX_DIM
from ..exceptions import MatrixError
from ..utils import check_dense_size_limit
from .pencil import MatrixPencil

logger = logging.getLogger(__name__)


def dense_generalized_eig(p: MatrixPencil, max_dim: int = DENSE_ORACLE_MAX_DIM) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    """
    All eigenpairs of (A, M) by Cholesky reduction to a standard problem.

    With M = LLᵀ, C = L⁻¹AL⁻ᵀ is diagonalized and the eigenvectors are mapped
    back by L⁻ᵀ, so they come out M-orthonormal.

    Args:
        p: Pencil to solve
        max_dim: Dense dimension limit

    Returns:
        (values, vectors): ascending eigenvalues and the matching eigenvectors
        as the columns of an n×n array

    Raises:
        DenseSizeLimitExceededError: If n exceeds max_dim
        MatrixError: If M is not positive definite
    """
    check_dense_size_limit(p.n, max_dim)
    a = p.a.toarray()
    m = p.m.toarray()
    try:
        chol = sla.cholesky(m, lower=True)
    except sla.LinAlgError as e:
        raise MatrixError(f"Mass matrix is not positive definite: {e}") from e

    tmp = sla.solve_triangular(chol, a, lower=True)
    c = sla.solve_triangular(chol, tmp.T, lower=True)
    c = 0.5 * (c + c.T)
    values, w = sla.eigh(c)
    vectors = sla.solve_triangular(chol.T, w, lower=False)
    if values[0] <= 0.0:
        raise MatrixError(f"Stiffness matrix is not positive definite (λ₁ = {values[0]:.3e})")
    logger.debug("Dense oracle n=%d: λ₁=%.15g λ₂=%.15g", p.n, values[0], values[min(1, p.n - 1)])
    return values, vectors
