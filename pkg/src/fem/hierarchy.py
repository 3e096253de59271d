"""Nested coarse/fine meshes, nodal interpolation and overlapping subdomains."""
import logging
from dataclasses import dataclass
from typing import List

import numpy as np
import scipy.sparse as sp
from numpy.typing import NDArray

from ..exceptions import ValidationError
from ..utils import mesh_level
from .mesh import StructuredMesh

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MeshHierarchy:
    """Coarse mesh of size H and fine mesh of size h with H/h = 2^j.

    Attributes:
        coarse: Coarse mesh (may have no interior nodes when H = 1)
        fine: Fine mesh
        interp: Sparse n_fine × n_coarse nodal interpolation R₀ᵀ
    """

    coarse: StructuredMesh
    fine: StructuredMesh
    interp: sp.csr_matrix

    @property
    def ratio(self) -> int:
        """Fine cells per coarse cell side."""
        return 2 ** (self.fine.level - self.coarse.level)

    @property
    def has_coarse_space(self) -> bool:
        return self.coarse.n_interior > 0


def _coarse_interpolation(coarse: StructuredMesh, fine: StructuredMesh) -> sp.csr_matrix:
    """
    Evaluate coarse P1 basis functions at fine interior nodes.

    A fine node with local cell coordinates (s, t) in coarse cell (ci, cj)
    lies in the lower triangle when s ≥ t.
    """
    r = 2 ** (fine.level - coarse.level)
    fi, fj = fine.interior_grid()
    ci = np.minimum(fi // r, coarse.cells_per_side - 1)
    cj = np.minimum(fj // r, coarse.cells_per_side - 1)
    s = (fi - ci * r) / r
    t = (fj - cj * r) / r
    lower = s >= t

    rows = np.arange(fine.n_interior)
    # (di, dj, weight) for the three coarse vertices of the containing triangle
    vertices = [
        (0, 0, np.where(lower, 1.0 - s, 1.0 - t)),
        (1, 1, np.where(lower, t, s)),
        (1, 0, np.where(lower, s - t, 0.0)),
        (0, 1, np.where(lower, 0.0, t - s)),
    ]
    all_rows, all_cols, all_vals = [], [], []
    for di, dj, w in vertices:
        col = coarse.node_index(ci + di, cj + dj)
        keep = (col >= 0) & (w > 0.0)
        all_rows.append(rows[keep])
        all_cols.append(col[keep])
        all_vals.append(w[keep])
    return sp.coo_matrix(
        (np.concatenate(all_vals), (np.concatenate(all_rows), np.concatenate(all_cols))),
        shape=(fine.n_interior, coarse.n_interior),
    ).tocsr()


def build_mesh_hierarchy(coarse_h: float, fine_h: float) -> MeshHierarchy:
    """
    Build the coarse/fine pair and the interpolation between them.

    Args:
        coarse_h: Coarse mesh size H (reciprocal power of two, H = 1 allowed)
        fine_h: Fine mesh size h ≤ H

    Raises:
        ValidationError: If a size is not a reciprocal power of two or h > H
    """
    coarse_level = mesh_level(coarse_h)
    fine_level = mesh_level(fine_h)
    if fine_level < coarse_level:
        raise ValidationError(f"Fine mesh size h={fine_h} must not exceed H={coarse_h}")
    coarse = StructuredMesh(coarse_level)
    fine = StructuredMesh(fine_level)
    if fine.n_interior == 0:
        raise ValidationError(f"Fine mesh h={fine_h} has no interior nodes")
    interp = _coarse_interpolation(coarse, fine)
    logger.debug("Mesh hierarchy H=%g h=%g: n_coarse=%d n_fine=%d", coarse_h, fine_h, coarse.n_interior, fine.n_interior)
    return MeshHierarchy(coarse, fine, interp)


def subdomain_index_sets(hierarchy: MeshHierarchy, overlap: float) -> List[NDArray[np.intp]]:
    """
    Fine interior indices of every overlapping subdomain.

    Subdomain (ci, cj) is the coarse cell [ci·H, (ci+1)·H] × [cj·H, (cj+1)·H]
    extended by δ/2 on each side, δ = overlap·H, and clipped to the domain,
    using closed intervals. Neighbouring subdomains thus share a strip of
    width δ. Without overlap the cells are taken half-open,
    (ci·H, (ci+1)·H], so nodes on shared edges belong to the left or bottom
    cell only. Sets may be empty; the Schwarz builder rejects them.

    Args:
        hierarchy: Coarse/fine pair
        overlap: Overlap width δ/H in [0, 1]

    Returns:
        List of sorted index arrays, coarse cells in row-major (cj slow) order
    """
    if not (0.0 <= overlap <= 1.0):
        raise ValidationError(f"overlap must be between 0.0-1.0, got {overlap}")
    fine = hierarchy.fine
    r = hierarchy.ratio
    side = fine.nodes_per_side
    extension = 0.5 * overlap * r
    eps = 1e-9

    def node_range(c: int) -> NDArray[np.intp]:
        if overlap == 0.0:
            lo, hi = c * r + 1, (c + 1) * r
        else:
            lo = int(np.ceil(c * r - extension - eps))
            hi = int(np.floor((c + 1) * r + extension + eps))
        return np.arange(max(lo, 1), min(hi, side) + 1)

    sets = []
    cells = hierarchy.coarse.cells_per_side
    for cj in range(cells):
        js = node_range(cj)
        for ci in range(cells):
            is_ = node_range(ci)
            jj, ii = np.meshgrid(js, is_, indexing="ij")
            sets.append(np.sort(fine.node_index(ii.ravel(), jj.ravel())).astype(np.intp))
    return sets
