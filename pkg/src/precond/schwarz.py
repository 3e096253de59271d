"""Two-level overlapping additive Schwarz preconditioner.

    B⁻¹ = R₀ᵀ A₀⁻¹ R₀ + Σᵢ Rᵢᵀ Aᵢ⁻¹ Rᵢ

with Aᵢ the principal submatrices of A on the overlapping subdomains and
A₀ = R₀ A R₀ᵀ the Galerkin coarse matrix. Local and coarse solves are exact
sparse factorizations.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
import scipy.sparse as sp
from numpy.typing import NDArray

from ..exceptions import (
    DimensionMismatchError,
    PreconditionerStateError,
    SubdomainConstructionError,
    ValidationError,
)
from ..fem.hierarchy import MeshHierarchy, subdomain_index_sets
from ..linalg.pencil import DenseVector, MatrixPencil, SpdMatrix, as_vector
from .base import PreconditionerHandle
from .factor import Solve, factorize_spd

logger = logging.getLogger(__name__)


@dataclass
class SchwarzDecomposition:
    """Subdomain index sets, local matrices and their factorizations.

    Attributes:
        n: Fine dimension
        subdomain_sets: Sorted fine index arrays, possibly overlapping
        local_matrices: Principal submatrices of A on each set
        coarse_interp: Sparse R₀ᵀ (n × n_coarse), or None without a coarse space
        coarse_matrix: Galerkin matrix R₀AR₀ᵀ, or None
        local_factorizations: Solve operators, filled by factorize()
        coarse_factorization: Coarse solve operator, filled by factorize()
        max_workers: Threads used for the subdomain solves of one application
    """

    n: int
    subdomain_sets: List[NDArray[np.intp]]
    local_matrices: List[SpdMatrix]
    coarse_interp: Optional[sp.csr_matrix] = None
    coarse_matrix: Optional[SpdMatrix] = None
    local_factorizations: List[Solve] = field(default_factory=list)
    coarse_factorization: Optional[Solve] = None
    max_workers: int = 1

    @property
    def num_subdomains(self) -> int:
        return len(self.subdomain_sets)

    @property
    def has_coarse_space(self) -> bool:
        return self.coarse_matrix is not None

    @property
    def is_factorized(self) -> bool:
        local_ready = len(self.local_factorizations) == self.num_subdomains
        coarse_ready = self.coarse_factorization is not None or not self.has_coarse_space
        return local_ready and coarse_ready

    def factorize(self, backend: str = "auto") -> "SchwarzDecomposition":
        """Factorize every local matrix and the coarse matrix in place."""
        self.local_factorizations = [factorize_spd(local, backend) for local in self.local_matrices]
        if self.has_coarse_space:
            self.coarse_factorization = factorize_spd(self.coarse_matrix, backend)
        return self

    def covers_all_indices(self) -> bool:
        """True if the subdomain sets jointly contain every fine index."""
        covered = np.zeros(self.n, dtype=bool)
        for index in self.subdomain_sets:
            covered[index] = True
        return bool(covered.all())


def schwarz_apply(d: SchwarzDecomposition, r) -> DenseVector:
    """
    Apply the additive Schwarz inverse to r.

    Subdomain solves are independent; with max_workers > 1 they run in a
    thread pool and are summed afterwards.

    Raises:
        PreconditionerStateError: If the decomposition is not factorized
        DimensionMismatchError: If len(r) != n
    """
    if not d.is_factorized:
        raise PreconditionerStateError("Schwarz decomposition must be factorized before it is applied")
    r = as_vector(r, d.n, "residual")

    def local_solve(i: int) -> DenseVector:
        return d.local_factorizations[i](r[d.subdomain_sets[i]])

    if d.max_workers > 1 and d.num_subdomains > 1:
        with ThreadPoolExecutor(max_workers=d.max_workers) as executor:
            corrections = list(executor.map(local_solve, range(d.num_subdomains)))
    else:
        corrections = [local_solve(i) for i in range(d.num_subdomains)]

    z = np.zeros(d.n)
    for index, correction in zip(d.subdomain_sets, corrections):
        z[index] += correction
    if d.has_coarse_space:
        z += d.coarse_interp @ d.coarse_factorization(d.coarse_interp.T @ r)
    return z


def galerkin_coarse_matrix(interp: sp.csr_matrix, a: SpdMatrix) -> SpdMatrix:
    """R₀AR₀ᵀ for the interpolation R₀ᵀ."""
    coarse = interp.T @ a.csr @ interp
    return SpdMatrix(0.5 * (coarse + coarse.T), check_symmetry=False)


def galerkin_coarse_pencil(hierarchy: MeshHierarchy, p: MatrixPencil) -> MatrixPencil:
    """Galerkin restriction of both pencil matrices to the coarse space."""
    if not hierarchy.has_coarse_space:
        raise ValidationError("Mesh hierarchy has no coarse interior nodes")
    return MatrixPencil(
        galerkin_coarse_matrix(hierarchy.interp, p.a),
        galerkin_coarse_matrix(hierarchy.interp, p.m),
    )


def build_additive_schwarz(
    a: SpdMatrix,
    subdomain_sets: List[NDArray[np.intp]],
    coarse_interp: Optional[sp.csr_matrix] = None,
    backend: str = "auto",
    max_workers: int = 1,
) -> SchwarzDecomposition:
    """
    Build and factorize an additive Schwarz decomposition from index sets.

    Args:
        a: Fine SPD matrix
        subdomain_sets: Index arrays into range(n)
        coarse_interp: Optional coarse interpolation R₀ᵀ with n rows
        backend: Factorization backend passed to factorize_spd
        max_workers: Threads for the subdomain solves

    Raises:
        SubdomainConstructionError: If a set is empty
        DimensionMismatchError: If coarse_interp has the wrong number of rows
    """
    sets = []
    for i, index in enumerate(subdomain_sets):
        index = np.unique(np.asarray(index, dtype=np.intp))
        if index.size == 0:
            raise SubdomainConstructionError(i)
        if index[0] < 0 or index[-1] >= a.n:
            raise ValidationError(f"Subdomain {i} has indices outside range({a.n})")
        sets.append(index)

    coarse_matrix = None
    if coarse_interp is not None and coarse_interp.shape[1] > 0:
        if coarse_interp.shape[0] != a.n:
            raise DimensionMismatchError(a.n, coarse_interp.shape[0], "coarse interpolation rows")
        coarse_interp = sp.csr_matrix(coarse_interp)
        coarse_matrix = galerkin_coarse_matrix(coarse_interp, a)
    else:
        coarse_interp = None

    decomposition = SchwarzDecomposition(
        n=a.n,
        subdomain_sets=sets,
        local_matrices=[a.submatrix(index) for index in sets],
        coarse_interp=coarse_interp,
        coarse_matrix=coarse_matrix,
        max_workers=max_workers,
    )
    decomposition.factorize(backend)
    logger.debug(
        "Additive Schwarz: %d subdomains, sizes %d..%d, coarse dim %d",
        len(sets),
        min(s.size for s in sets),
        max(s.size for s in sets),
        0 if coarse_matrix is None else coarse_matrix.n,
    )
    return decomposition


def build_two_level_overlapping(
    hierarchy: MeshHierarchy,
    overlap_ratio: float,
    a: SpdMatrix,
    backend: str = "auto",
    max_workers: int = 1,
) -> SchwarzDecomposition:
    """
    Two-level overlapping decomposition on a structured mesh hierarchy.

    One subdomain per coarse cell, neighbours overlapping in a strip of width
    overlap_ratio·H; the coarse space is the P1 space of the coarse mesh (absent when H = 1).

    Raises:
        DimensionMismatchError: If a does not live on the fine mesh
        SubdomainConstructionError: If a subdomain is empty after clipping
    """
    if a.n != hierarchy.fine.n_interior:
        raise DimensionMismatchError(hierarchy.fine.n_interior, a.n, "fine matrix")
    sets = subdomain_index_sets(hierarchy, overlap_ratio)
    interp = hierarchy.interp if hierarchy.has_coarse_space else None
    return build_additive_schwarz(a, sets, interp, backend, max_workers)


def schwarz_preconditioner(d: SchwarzDecomposition) -> PreconditionerHandle:
    """Wrap a factorized decomposition as a preconditioner handle."""
    if not d.is_factorized:
        raise PreconditionerStateError("Schwarz decomposition must be factorized before it is wrapped")
    return PreconditionerHandle(d.n, lambda r: schwarz_apply(d, r), "schwarz2")


def coloring_count(d: SchwarzDecomposition, a: SpdMatrix) -> int:
    """
    Colors of a greedy coloring of the subdomain coupling graph.

    Two subdomains are coupled when they share an index or A couples them.
    Subdomains of one color give A-orthogonal local projections, so
    ν_max ≤ colors + 1 with a coarse space (colors without).
    """
    n_sub = d.num_subdomains
    membership = sp.csr_matrix(
        (
            np.ones(sum(s.size for s in d.subdomain_sets)),
            (np.concatenate(d.subdomain_sets), np.repeat(np.arange(n_sub), [s.size for s in d.subdomain_sets])),
        ),
        shape=(d.n, n_sub),
    )
    pattern = sp.csr_matrix(a.csr, copy=True)
    pattern.data = np.ones_like(pattern.data)
    coupling = (membership.T @ (pattern + sp.identity(d.n)) @ membership).tocsr()

    colors = np.full(n_sub, -1)
    for i in range(n_sub):
        neighbours = coupling.indices[coupling.indptr[i]:coupling.indptr[i + 1]]
        taken = set(colors[neighbours[neighbours != i]].tolist())
        color = 0
        while color in taken:
            color += 1
        colors[i] = color
    return int(colors.max()) + 1
