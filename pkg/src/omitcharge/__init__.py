"""Charge detection with optomechanically induced transparency (OMIT).

Simulates the steady state of a driven optical cavity whose movable mirror
is Coulomb-coupled to a nearby charged body, computes exact and approximate
probe-transmission spectra, validates the sideband solution against a
time-domain integration of the mean-value equations, and inverts the OMIT
window width into a charge number.

All quantities are SI; frequencies are angular (rad/s) unless a name says
otherwise.
"""

__version__ = "0.1.0"

from .constants import PhysicalConstants, CODATA
from .params import SystemParams, DerivedParams, ValidationReport, derive, validate
from .steady_state import (
    CubicCoefficients,
    SteadyState,
    cubic_coefficients,
    solve_steady_state,
    approx_steady_state,
)
from .response import (
    ProbeResponse,
    TuningPoints,
    ChargePoint,
    c_plus,
    epsilon_T_exact,
    epsilon_T_approx,
    transmission,
    tuning_points,
    sweep_spectrum,
    sweep_charge,
)
from .inversion import (
    ChargeEstimate,
    MonotonicityReport,
    DetectionMetrics,
    width_of_n,
    estimate_charge,
    monotonicity_scan,
    detection_metrics,
)
from . import errors, oracle

__all__ = [
    "PhysicalConstants",
    "CODATA",
    "SystemParams",
    "DerivedParams",
    "ValidationReport",
    "derive",
    "validate",
    "CubicCoefficients",
    "SteadyState",
    "cubic_coefficients",
    "solve_steady_state",
    "approx_steady_state",
    "ProbeResponse",
    "TuningPoints",
    "ChargePoint",
    "c_plus",
    "epsilon_T_exact",
    "epsilon_T_approx",
    "transmission",
    "tuning_points",
    "sweep_spectrum",
    "sweep_charge",
    "ChargeEstimate",
    "MonotonicityReport",
    "DetectionMetrics",
    "width_of_n",
    "estimate_charge",
    "monotonicity_scan",
    "detection_metrics",
    "errors",
    "oracle",
    "__version__",
]
