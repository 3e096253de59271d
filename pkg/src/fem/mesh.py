"""Structured triangular meshes of the unit square.

Each of the 2^k × 2^k square cells is split along the diagonal from its
lower-left to its upper-right corner. Only interior nodes carry unknowns
(homogeneous Dirichlet boundary); interior node (i, j), 1 ≤ i, j ≤ 2^k − 1,
has flat index (j − 1)(2^k − 1) + (i − 1).
"""
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from ..exceptions import ValidationError
from ..utils import mesh_level

# Local vertex offsets (di, dj) of the two triangles of a cell
LOWER_TRIANGLE = ((0, 0), (1, 0), (1, 1))
UPPER_TRIANGLE = ((0, 0), (1, 1), (0, 1))


@dataclass(frozen=True)
class StructuredMesh:
    """Uniform mesh with h = 2^-level.

    Attributes:
        level: Refinement level k ≥ 0 (k = 0 has no interior nodes)
    """

    level: int

    def __post_init__(self):
        if self.level < 0:
            raise ValidationError(f"Mesh level must be nonnegative, got {self.level}")

    @classmethod
    def from_h(cls, h: float) -> "StructuredMesh":
        return cls(mesh_level(h))

    @property
    def h(self) -> float:
        return 2.0 ** -self.level

    @property
    def cells_per_side(self) -> int:
        return 2 ** self.level

    @property
    def nodes_per_side(self) -> int:
        """Interior nodes per coordinate direction."""
        return self.cells_per_side - 1

    @property
    def n_interior(self) -> int:
        return self.nodes_per_side ** 2

    def node_index(self, i, j):
        """
        Flat index of grid node (i, j), or −1 for boundary nodes.

        Works elementwise on integer arrays.
        """
        i = np.asarray(i)
        j = np.asarray(j)
        side = self.nodes_per_side
        interior = (i >= 1) & (i <= side) & (j >= 1) & (j <= side)
        return np.where(interior, (j - 1) * side + (i - 1), -1)

    def interior_grid(self):
        """Grid indices (i, j) of all interior nodes in flat order."""
        side = self.nodes_per_side
        jj, ii = np.meshgrid(np.arange(1, side + 1), np.arange(1, side + 1), indexing="ij")
        return ii.ravel(), jj.ravel()

    def coordinates(self) -> NDArray[np.float64]:
        """(n_interior, 2) array of interior node coordinates."""
        i, j = self.interior_grid()
        return np.column_stack([i * self.h, j * self.h])

    def triangles(self, offsets) -> NDArray[np.int64]:
        """
        (cells, 3) flat vertex indices of one triangle type in every cell.

        Boundary vertices are reported as −1.
        """
        m = self.cells_per_side
        cj, ci = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
        ci = ci.ravel()
        cj = cj.ravel()
        return np.column_stack([self.node_index(ci + di, cj + dj) for di, dj in offsets])

    def cell_centroids(self, offsets) -> NDArray[np.float64]:
        """(cells, 2) centroids of one triangle type."""
        m = self.cells_per_side
        cj, ci = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
        shift = np.mean(np.asarray(offsets, dtype=np.float64), axis=0)
        return np.column_stack([(ci.ravel() + shift[0]) * self.h, (cj.ravel() + shift[1]) * self.h])
