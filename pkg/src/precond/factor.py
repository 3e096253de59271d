"""Sparse SPD factorizations.

Uses CHOLMOD through scikit-sparse when it is installed and falls back to
SuperLU in symmetric mode otherwise.
"""
import logging
from typing import Callable

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ..exceptions import MatrixError, MissingDependencyError
from ..linalg.pencil import DenseVector, SpdMatrix

logger = logging.getLogger(__name__)

try:
    from sksparse.cholmod import CholmodNotPositiveDefiniteError, cholesky
    CHOLMOD_AVAILABLE = True
except ImportError as e:
    CHOLMOD_AVAILABLE = False
    IMPORT_ERROR = str(e)

Solve = Callable[[DenseVector], DenseVector]


def is_available() -> bool:
    """Check if the CHOLMOD backend is available."""
    return CHOLMOD_AVAILABLE


def get_missing_dependencies() -> list:
    """Return list of missing optional dependencies."""
    missing = []
    if not CHOLMOD_AVAILABLE:
        missing.append("scikit-sparse")
    return missing


def factorize_spd(matrix: SpdMatrix, backend: str = "auto") -> Solve:
    """
    Factorize an SPD matrix and return its solve operator.

    Args:
        matrix: SPD matrix
        backend: "auto", "cholmod" or "splu"

    Returns:
        Callable r ↦ matrix⁻¹r accepting vectors or n×k arrays

    Raises:
        MatrixError: If the matrix is not positive definite
        MissingDependencyError: If "cholmod" is requested but not installed
    """
    if backend == "cholmod" and not CHOLMOD_AVAILABLE:
        raise MissingDependencyError(get_missing_dependencies())
    csc = sp.csc_matrix(matrix.csr)

    if backend != "splu" and CHOLMOD_AVAILABLE:
        try:
            factor = cholesky(csc)
        except CholmodNotPositiveDefiniteError as e:
            raise MatrixError(f"Matrix is not positive definite: {e}") from e
        return factor

    try:
        lu = spla.splu(
            csc,
            permc_spec="MMD_AT_PLUS_A",
            diag_pivot_thresh=0.0,
            options={"SymmetricMode": True},
        )
    except RuntimeError as e:
        raise MatrixError(f"Matrix is singular: {e}") from e
    # With symmetric pivoting U = D·Lᵀ, so positive definiteness shows on diag(U)
    if not np.all(lu.U.diagonal() > 0.0):
        raise MatrixError("Matrix is not positive definite")
    return lu.solve
