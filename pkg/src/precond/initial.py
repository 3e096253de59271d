"""Coarse-space eigenvector start for the preconditioned solvers."""
import logging

import numpy as np
import scipy.sparse.linalg as spla

from ..config import COARSE_EIGEN_TOL, DENSE_ORACLE_MAX_DIM
from ..exceptions import DimensionMismatchError, ValidationError
from ..fem.hierarchy import MeshHierarchy
from ..linalg.oracle import dense_generalized_eig
from ..linalg.pencil import DenseVector, MatrixPencil
from ..manifold.paired import PairedVector, paired_normalize
from .base import PreconditionerHandle

logger = logging.getLogger(__name__)


def coarse_smallest_eigenvector(coarse_pencil: MatrixPencil) -> DenseVector:
    """
    Smallest eigenvector u₀ of the coarse pencil, sign fixed so Σu₀ ≥ 0.

    Dense up to DENSE_ORACLE_MAX_DIM, iterative (tolerance 1e-12) above.
    """
    if coarse_pencil.n <= DENSE_ORACLE_MAX_DIM:
        _, vectors = dense_generalized_eig(coarse_pencil)
        u0 = vectors[:, 0]
    else:
        logger.info("Coarse dimension %d above dense limit, using eigsh", coarse_pencil.n)
        _, vectors = spla.eigsh(
            coarse_pencil.a.csr, k=1, M=coarse_pencil.m.csr, which="SA", tol=COARSE_EIGEN_TOL
        )
        u0 = vectors[:, 0]
    if u0.sum() < 0.0:
        u0 = -u0
    return u0


def coarse_eigen_initial(hierarchy: MeshHierarchy, coarse_pencil: MatrixPencil, pc: PreconditionerHandle) -> PairedVector:
    """
    Start point x̂₀ = R₀ᵀu₀, x₀ = B⁻¹x̂₀, B-normalized.

    Args:
        hierarchy: Mesh pair providing R₀ᵀ
        coarse_pencil: Coarse pencil, usually the Galerkin restriction of the fine one
        pc: Fine preconditioner

    Raises:
        DimensionMismatchError: If the coarse pencil does not match the coarse space
        ValidationError: If the hierarchy has no coarse space
    """
    if not hierarchy.has_coarse_space:
        raise ValidationError("Coarse eigenvector start needs a coarse space (H < 1)")
    if coarse_pencil.n != hierarchy.interp.shape[1]:
        raise DimensionMismatchError(hierarchy.interp.shape[1], coarse_pencil.n, "coarse pencil")
    if pc.n != hierarchy.interp.shape[0]:
        raise DimensionMismatchError(hierarchy.interp.shape[0], pc.n, "preconditioner")
    u0 = coarse_smallest_eigenvector(coarse_pencil)
    x0hat = hierarchy.interp @ u0
    return paired_normalize(PairedVector.from_twin(x0hat, pc.apply))
