"""Recorded quality parameters of a two-level Schwarz decomposition."""
import logging
import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np
import scipy.linalg as sla

from ..fem.hierarchy import MeshHierarchy
from ..linalg.pencil import MatrixPencil
from ..precond.initial import coarse_smallest_eigenvector
from ..precond.schwarz import SchwarzDecomposition, coloring_count, galerkin_coarse_pencil
from .dense import DenseProblem

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SchwarzParameters:
    """Decomposition parameters; recorded, never asserted.

    Attributes:
        num_subdomains: Number of local subspaces
        colors: Colors of the subdomain coupling graph
        nu_max_bound: colors + 1 with a coarse space, colors without
        c_p: max over subdomains of 1/λ_min(Aᵢ, Mᵢ)
        coarse_lambda: Smallest eigenvalue λ₀ of the coarse pencil
        c_c: min over α of ‖u₁ − αR₀ᵀu₀‖_A with M-unit u₁ and M₀-unit u₀
    """

    num_subdomains: int
    colors: int
    nu_max_bound: int
    c_p: float
    coarse_lambda: Optional[float] = None
    c_c: Optional[float] = None

    def to_dict(self) -> dict:
        return asdict(self)


def schwarz_parameters(
    d: SchwarzDecomposition,
    p: MatrixPencil,
    hierarchy: Optional[MeshHierarchy] = None,
    problem: Optional[DenseProblem] = None,
) -> SchwarzParameters:
    """
    Evaluate the decomposition parameters densely.

    Args:
        d: Factorized decomposition of p.a
        p: Fine pencil
        hierarchy: Mesh pair, needed for the coarse-space parameters
        problem: Reusable dense eigendata of p, needed for c_c
    """
    colors = coloring_count(d, p.a)
    c_p = 0.0
    for index, local in zip(d.subdomain_sets, d.local_matrices):
        local_mass = p.m.submatrix(index).toarray()
        lowest = sla.eigh(local.toarray(), local_mass, eigvals_only=True, subset_by_index=[0, 0])[0]
        c_p = max(c_p, 1.0 / float(lowest))

    coarse_lambda = c_c = None
    if hierarchy is not None and hierarchy.has_coarse_space:
        coarse = galerkin_coarse_pencil(hierarchy, p)
        u0 = coarse_smallest_eigenvector(coarse)
        u0 = u0 / math.sqrt(float(u0 @ (coarse.m @ u0)))
        coarse_lambda = float(u0 @ (coarse.a @ u0))
        if problem is not None:
            lifted = hierarchy.interp @ u0
            a = problem.a
            alpha = float(lifted @ a @ problem.u1) / float(lifted @ a @ lifted)
            defect = problem.u1 - alpha * lifted
            c_c = math.sqrt(max(float(defect @ a @ defect), 0.0))

    params = SchwarzParameters(
        num_subdomains=d.num_subdomains,
        colors=colors,
        nu_max_bound=colors + 1 if d.has_coarse_space else colors,
        c_p=c_p,
        coarse_lambda=coarse_lambda,
        c_c=c_c,
    )
    logger.debug("Schwarz parameters: %s", params)
    return params
