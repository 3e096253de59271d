"""
Eigensolvers for the smallest eigenpair of an SPD pencil.

RAP and LORAG with their coefficient selection, the PSD/RA/SD baselines, and
the shared stopping logic.
"""
from .baselines import ra_solve, sd_solve
from .coefficients import (
    COEFFICIENT_VARIANTS,
    AccelCoefficients,
    compute_coefficients,
    initial_gap_admissible,
    rate_bound,
)
from .flow import FlowInvariants, gradient_flow_invariants
from .lorag import UNIT_SPHERE, RayleighObjective, SphereObjective, SphereOps, lorag_solve, lorag_step
from .parameters import (
    ParameterChoice,
    SpectrumEstimate,
    estimate_spectrum,
    m_sphere_parameters,
    select_parameters,
)
from .psd import psd_solve, psd_step
from .rap import IterateState, initial_state, rap_solve, rap_step
from .stopping import ResidualMeter, StopDecision, stopping_check

__all__ = [
    'AccelCoefficients',
    'COEFFICIENT_VARIANTS',
    'compute_coefficients',
    'rate_bound',
    'initial_gap_admissible',
    'IterateState',
    'initial_state',
    'rap_step',
    'rap_solve',
    'SphereOps',
    'SphereObjective',
    'UNIT_SPHERE',
    'RayleighObjective',
    'lorag_step',
    'lorag_solve',
    'psd_step',
    'psd_solve',
    'sd_solve',
    'ra_solve',
    'ParameterChoice',
    'SpectrumEstimate',
    'estimate_spectrum',
    'select_parameters',
    'm_sphere_parameters',
    'FlowInvariants',
    'gradient_flow_invariants',
    'StopDecision',
    'stopping_check',
    'ResidualMeter',
]
