"""Shared fixtures: small random pencils, FEM pencils and Schwarz preconditioners."""
import numpy as np
import pytest
import scipy.sparse as sp

from src.fem import assemble_laplacian_p1, build_mesh_hierarchy
from src.linalg import MatrixPencil, SpdMatrix
from src.precond import build_two_level_overlapping, schwarz_preconditioner


def random_spd(rng: np.random.Generator, n: int, cond: float = 10.0) -> np.ndarray:
    """Dense SPD matrix with eigenvalues spread log-uniformly over [1, cond]."""
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    values = np.geomspace(1.0, cond, n)
    rng.shuffle(values)
    a = (q * values) @ q.T
    return 0.5 * (a + a.T)


def random_pencil(rng: np.random.Generator, n: int, cond_a: float = 50.0, cond_m: float = 4.0) -> MatrixPencil:
    return MatrixPencil(
        SpdMatrix.from_dense(random_spd(rng, n, cond_a)),
        SpdMatrix.from_dense(random_spd(rng, n, cond_m)),
    )


def diagonal_pencil(values) -> MatrixPencil:
    """(diag(values), I)."""
    a = SpdMatrix(sp.diags(np.asarray(values, dtype=np.float64)).tocsr())
    return MatrixPencil.standard(a)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def small_pencil(rng):
    return random_pencil(rng, 12)


@pytest.fixture
def fem_setup():
    """H = 1/4, h = 1/8 Laplacian with its two-level Schwarz preconditioner."""
    hierarchy = build_mesh_hierarchy(0.25, 0.125)
    pencil = assemble_laplacian_p1(hierarchy.fine)
    decomposition = build_two_level_overlapping(hierarchy, 0.5, pencil.a)
    return hierarchy, pencil, decomposition, schwarz_preconditioner(decomposition)
