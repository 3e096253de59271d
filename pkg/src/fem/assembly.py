"""P1 finite element assembly of −∇·(K∇u) = λu with Dirichlet boundary."""
import logging
from typing import Callable, Optional, Union

import numpy as np
import scipy.sparse as sp
from numpy.typing import NDArray

from ..exceptions import DomainError, ValidationError
from ..linalg.pencil import MatrixPencil, SpdMatrix
from .mesh import LOWER_TRIANGLE, UPPER_TRIANGLE, StructuredMesh

logger = logging.getLogger(__name__)

CoefficientField = Union[None, NDArray[np.float64], Callable[[NDArray, NDArray], NDArray]]

# Barycentric gradients times h, one row per local vertex
_GRADIENTS = {
    LOWER_TRIANGLE: np.array([[-1.0, 0.0], [1.0, -1.0], [0.0, 1.0]]),
    UPPER_TRIANGLE: np.array([[0.0, -1.0], [1.0, 0.0], [-1.0, 1.0]]),
}
_REFERENCE_MASS = (np.ones((3, 3)) + np.eye(3)) / 12.0


def _coefficient_tensors(coeff: CoefficientField, centroids: NDArray[np.float64]) -> NDArray[np.float64]:
    """Evaluate K at element centroids as a (cells, 2, 2) array, checking SPD."""
    cells = centroids.shape[0]
    if coeff is None:
        k = np.broadcast_to(np.eye(2), (cells, 2, 2))
    elif callable(coeff):
        k = np.broadcast_to(np.asarray(coeff(centroids[:, 0], centroids[:, 1]), dtype=np.float64), (cells, 2, 2))
    else:
        k = np.broadcast_to(np.asarray(coeff, dtype=np.float64), (cells, 2, 2))

    if not np.allclose(k, np.swapaxes(k, 1, 2)):
        raise DomainError("Coefficient tensor is not symmetric")
    # 2x2 symmetric: positive definite iff k11 > 0 and det > 0
    det = k[:, 0, 0] * k[:, 1, 1] - k[:, 0, 1] * k[:, 1, 0]
    if not (np.all(k[:, 0, 0] > 0.0) and np.all(det > 0.0)):
        raise DomainError("Coefficient tensor is not positive definite")
    return k


def assemble_laplacian_p1(mesh: StructuredMesh, coeff: CoefficientField = None) -> MatrixPencil:
    """
    Assemble the stiffness and consistent mass matrices on interior nodes.

    Args:
        mesh: Structured mesh with at least one interior node
        coeff: None for the Laplacian, a constant SPD 2×2 tensor, or a callable
            (x, y) ↦ K evaluated at element centroids

    Returns:
        MatrixPencil (A, M)

    Raises:
        DomainError: If the coefficient is not SPD
        ValidationError: If the mesh has no interior nodes
    """
    n = mesh.n_interior
    if n == 0:
        raise ValidationError(f"Mesh with h={mesh.h} has no interior nodes")
    area = 0.5 * mesh.h ** 2

    rows, cols, stiff, mass = [], [], [], []
    for offsets, grad in _GRADIENTS.items():
        tri = mesh.triangles(offsets)
        g = grad / mesh.h
        k = _coefficient_tensors(coeff, mesh.cell_centroids(offsets))
        local_a = area * np.einsum("ia,cab,jb->cij", g, k, g)
        local_m = np.broadcast_to(area * _REFERENCE_MASS, local_a.shape)

        r = np.repeat(tri, 3, axis=1)
        c = np.tile(tri, (1, 3))
        keep = (r >= 0) & (c >= 0)
        rows.append(r[keep])
        cols.append(c[keep])
        stiff.append(local_a.reshape(-1, 9)[keep])
        mass.append(local_m.reshape(-1, 9)[keep])

    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    a = sp.coo_matrix((np.concatenate(stiff), (rows, cols)), shape=(n, n)).tocsr()
    m = sp.coo_matrix((np.concatenate(mass), (rows, cols)), shape=(n, n)).tocsr()
    logger.debug("Assembled P1 pencil h=%g: n=%d nnz(A)=%d", mesh.h, n, a.nnz)
    return MatrixPencil(SpdMatrix(a), SpdMatrix(m))
