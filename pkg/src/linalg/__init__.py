"""
Linear algebra layer: sparse SPD storage, Rayleigh quotient kernels,
Rayleigh-Ritz, the dense reference oracle and Lanczos estimates.
"""

from .kernels import euclidean_gradient, rayleigh_quotient, residual, weighted_inner, weighted_norm
from .lanczos import LanczosEstimate, extremal_pencil_eigs
from .matrix_market import read_spd_matrix, read_vector, write_sparse_matrix, write_spd_matrix, write_vector
from .oracle import dense_generalized_eig
from .pencil import DenseVector, MatrixPencil, SpdMatrix, as_vector
from .ritz import RitzResult, rayleigh_ritz

__all__ = [
    'DenseVector',
    'SpdMatrix',
    'MatrixPencil',
    'as_vector',
    'rayleigh_quotient',
    'euclidean_gradient',
    'residual',
    'weighted_inner',
    'weighted_norm',
    'RitzResult',
    'rayleigh_ritz',
    'dense_generalized_eig',
    'LanczosEstimate',
    'extremal_pencil_eigs',
    'read_spd_matrix',
    'write_sparse_matrix',
    'write_spd_matrix',
    'read_vector',
    'write_vector',
]
