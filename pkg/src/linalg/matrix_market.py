"""Matrix Market and plain-text vector I/O."""
import logging

import numpy as np
import scipy.io
import scipy.sparse as sp

from ..exceptions import InvalidFileError, MatrixError
from ..utils import validate_input_path
from .pencil import DenseVector, SpdMatrix, as_vector

logger = logging.getLogger(__name__)


def read_spd_matrix(path: str) -> SpdMatrix:
    """
    Read a real symmetric matrix in Matrix Market coordinate format.

    Files declared symmetric store one triangle; scipy expands them to the
    full pattern.

    Raises:
        InvalidFileError: If the file is missing or not Matrix Market
        MatrixError: If the matrix is not square and symmetric
    """
    validate_input_path(path, [".mtx", ".mtx.gz"])
    try:
        raw = scipy.io.mmread(path)
    except (ValueError, OSError) as e:
        raise InvalidFileError(f"Cannot read Matrix Market file {path}: {e}") from e
    if not sp.issparse(raw):
        raw = sp.csr_matrix(raw)
    if np.iscomplexobj(raw.data):
        raise MatrixError(f"Matrix in {path} is complex")
    matrix = SpdMatrix(raw)
    logger.info("Read %s: n=%d nnz=%d", path, matrix.n, matrix.nnz)
    return matrix


def write_spd_matrix(path: str, matrix: SpdMatrix, comment: str = "") -> None:
    """Write a matrix in symmetric Matrix Market coordinate format."""
    scipy.io.mmwrite(path, sp.coo_matrix(matrix.csr), comment=comment, symmetry="symmetric", precision=17)
    logger.info("Wrote %s: n=%d nnz=%d", path, matrix.n, matrix.nnz)


def write_sparse_matrix(path: str, matrix: sp.spmatrix, comment: str = "") -> None:
    """Write a general (possibly rectangular) sparse matrix in coordinate format."""
    scipy.io.mmwrite(path, sp.coo_matrix(matrix), comment=comment, precision=17)
    logger.info("Wrote %s: shape=%s nnz=%d", path, matrix.shape, matrix.nnz)


def read_vector(path: str, n: int = None) -> DenseVector:
    """Read a vector stored as one value per line."""
    validate_input_path(path, [".txt", ".vec", ".dat"])
    try:
        values = np.loadtxt(path, dtype=np.float64, ndmin=1)
    except ValueError as e:
        raise InvalidFileError(f"Cannot read vector file {path}: {e}") from e
    return as_vector(values, n, path)


def write_vector(path: str, x: DenseVector) -> None:
    np.savetxt(path, as_vector(x), fmt="%.17g")
