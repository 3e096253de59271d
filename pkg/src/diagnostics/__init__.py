"""
Diagnostics: preconditioner quality measures, convexity constants and the
eigenvalue-perturbation inequality checks, evaluated densely on small problems.
"""

from .convexity import (
    ConvexityConstants,
    b_sphere_tangent,
    convexity_constants,
    geodesic_hessian_fd,
    m_sphere_constants,
)
from .dense import DenseProblem, complement_basis, to_dense
from .epic import EPIC_CHECKS, EpicReport, epic_check
from .quality import (
    PreconQuality,
    admissibility,
    decomposition_bound,
    estimate_precon_quality,
    kappa_nu,
    leading_angle_estimate,
    per_point_leading_cos,
    sublevel_samples,
    varrho_lower_bound,
    varrho_varsigma_estimate,
)
from .report import diagnostics_frame, diagnostics_row, write_report
from .schwarz import SchwarzParameters, schwarz_parameters

__all__ = [
    'DenseProblem',
    'to_dense',
    'complement_basis',
    'PreconQuality',
    'kappa_nu',
    'per_point_leading_cos',
    'sublevel_samples',
    'leading_angle_estimate',
    'varrho_varsigma_estimate',
    'decomposition_bound',
    'varrho_lower_bound',
    'admissibility',
    'estimate_precon_quality',
    'ConvexityConstants',
    'convexity_constants',
    'm_sphere_constants',
    'b_sphere_tangent',
    'geodesic_hessian_fd',
    'EPIC_CHECKS',
    'EpicReport',
    'epic_check',
    'SchwarzParameters',
    'schwarz_parameters',
    'diagnostics_row',
    'diagnostics_frame',
    'write_report',
]
