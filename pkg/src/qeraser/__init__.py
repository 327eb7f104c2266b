"""Quantum-eraser simulation for multi-slit interference with a path detector."""

from .erasure import (
    DetectorBasis,
    ReadoutOutcome,
    basis_computational,
    basis_custom,
    basis_eraser,
    basis_sx3,
    joint_patterns,
    outcome_probability,
    project,
    random_unitary,
)
from .errors import (
    AliasingRisk,
    ConfigError,
    DimensionMismatch,
    GridMismatch,
    NonUnitary,
    ParameterOutOfRegime,
    WindowOutOfGrid,
)
from .oracle import GridWave, cross_validate, sample_state, spectral_propagate
from .patterns import Kind, Scenario, closed_form, compare, sorkin, visibility
from .propagation import (
    PropagationParams,
    a_from_geometry,
    a_from_time,
    evaluate_amplitude,
    marginal_intensity,
    propagate_packet,
    propagate_state,
)
from .qstate import (
    EntangledState,
    GaussianPacket,
    Pattern,
    ScreenGrid,
    SlitArray,
    make_slit_state,
    make_tagged_state,
    norm_squared,
)

__version__ = "0.1.0"
