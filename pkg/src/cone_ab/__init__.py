"""Aharonov-Bohm scattering of a spinless particle on a cone.

Phase shifts, S-matrix elements, Abel-regularized amplitudes and bound-state
poles for the one-parameter family of self-adjoint extensions, checked
against direct radial integration.
"""
import logging

from .channels import Channel, ChannelClass, classify, effective_j_squared
from .geometry import (
    ConeGeometry,
    gaussian_curvature_coefficient,
    geometric_potential_delta_coefficient,
    geometric_potential_regular_coefficient,
    mean_curvature,
)
from .scattering import (
    INFINITE,
    ZERO,
    AmplitudeResult,
    BoundState,
    ExtensionProfile,
    ExtensionSpec,
    PhaseShift,
    RegularizationConfig,
    SMatrixElement,
    coefficient_ratio,
    differential_cross_section,
    find_bound_states,
    phase_shift,
    s_matrix_element,
    s_matrix_value,
    scattering_amplitude,
    scattering_amplitudes,
)

__version__ = "0.1.0"

logging.getLogger(__name__).addHandler(logging.NullHandler())

__all__ = [
    "AmplitudeResult",
    "BoundState",
    "Channel",
    "ChannelClass",
    "ConeGeometry",
    "ExtensionProfile",
    "ExtensionSpec",
    "INFINITE",
    "PhaseShift",
    "RegularizationConfig",
    "SMatrixElement",
    "ZERO",
    "classify",
    "coefficient_ratio",
    "differential_cross_section",
    "effective_j_squared",
    "find_bound_states",
    "gaussian_curvature_coefficient",
    "geometric_potential_delta_coefficient",
    "geometric_potential_regular_coefficient",
    "mean_curvature",
    "phase_shift",
    "s_matrix_element",
    "s_matrix_value",
    "scattering_amplitude",
    "scattering_amplitudes",
]
