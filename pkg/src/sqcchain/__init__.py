"""Exact steered-coherence engine for the transverse-field XY chain with
three-spin interaction."""

from .correlators import BlochTensor, bloch_tensor, g_window, magnetization
from .criticality import (
    CriticalPoint,
    Kind,
    NotFound,
    SweepSpec,
    detect_boundaries,
    detect_cusp,
    detect_jump,
    gamma_extremum,
    known_critical_points,
    phase_diagram,
    sweep,
)
from .estimators import BoundaryLocator, CuspLocator, JumpLocator, SqcTransformer
from .model import ChainParams, InverseTemperature, ZeroTemperature
from .quantumness import sqc_closed_l1, sqc_closed_re, sqc_oracle, state_from_bloch

__version__ = "0.1.0"

__all__ = [
    "BlochTensor",
    "BoundaryLocator",
    "ChainParams",
    "CriticalPoint",
    "CuspLocator",
    "InverseTemperature",
    "JumpLocator",
    "Kind",
    "NotFound",
    "SqcTransformer",
    "SweepSpec",
    "ZeroTemperature",
    "bloch_tensor",
    "detect_boundaries",
    "detect_cusp",
    "detect_jump",
    "g_window",
    "gamma_extremum",
    "known_critical_points",
    "magnetization",
    "phase_diagram",
    "sqc_closed_l1",
    "sqc_closed_re",
    "sqc_oracle",
    "state_from_bloch",
    "sweep",
]
