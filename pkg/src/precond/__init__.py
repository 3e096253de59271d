"""
Preconditioners: simple handles, the two-level overlapping additive Schwarz
method and the coarse-space start vector.
"""

from .base import (
    PreconditionerHandle,
    assemble_explicit_b,
    assemble_explicit_inverse,
    exact_preconditioner,
    identity_preconditioner,
    jacobi_preconditioner,
    mass_preconditioner,
)
from .factor import factorize_spd, get_missing_dependencies, is_available
from .initial import coarse_eigen_initial, coarse_smallest_eigenvector
from .schwarz import (
    SchwarzDecomposition,
    build_additive_schwarz,
    build_two_level_overlapping,
    coloring_count,
    galerkin_coarse_pencil,
    schwarz_apply,
    schwarz_preconditioner,
)

__all__ = [
    'PreconditionerHandle',
    'identity_preconditioner',
    'jacobi_preconditioner',
    'exact_preconditioner',
    'mass_preconditioner',
    'assemble_explicit_inverse',
    'assemble_explicit_b',
    'factorize_spd',
    'is_available',
    'get_missing_dependencies',
    'SchwarzDecomposition',
    'schwarz_apply',
    'build_additive_schwarz',
    'build_two_level_overlapping',
    'schwarz_preconditioner',
    'galerkin_coarse_pencil',
    'coloring_count',
    'coarse_eigen_initial',
    'coarse_smallest_eigenvector',
]
