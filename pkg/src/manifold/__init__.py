"""
Sphere geometry: the Euclidean unit sphere and the B-sphere of paired vectors.
"""

from .paired import (
    PairedVector,
    combine_paired,
    is_b_normalized,
    paired_angle,
    paired_geodesic_step,
    paired_normalize,
    paired_unit_direction,
)
from .sphere import (
    SpherePoint,
    TangentVector,
    distance,
    exp_map,
    log_map,
    parallel_transport,
    project_tangent,
    random_point,
    random_tangent,
)

__all__ = [
    'SpherePoint',
    'TangentVector',
    'project_tangent',
    'exp_map',
    'log_map',
    'distance',
    'parallel_transport',
    'random_point',
    'random_tangent',
    'PairedVector',
    'combine_paired',
    'paired_normalize',
    'paired_unit_direction',
    'paired_geodesic_step',
    'paired_angle',
    'is_b_normalized',
]
