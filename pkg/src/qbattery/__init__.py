"""Two-qubit quantum battery charged from an arbitrary point on the Bloch sphere.

Closed-form dynamics and thermodynamics (``analytic``, ``thermo``), their
numerical cross-check (``oracle``), optimal charging (``optimize``) and
charger-battery entanglement (``entangle``).
"""

__version__ = "0.1.0"

from .errors import (
    BatteryError,
    ConvergenceError,
    DegenerateObjectiveError,
    IntegrationError,
    InvalidStateError,
    NotHermitianError,
    NotPSDError,
    RegimeError,
)
from .model import BlochState, JointState, QubitState, SystemParams
from .analytic import MomentSet
from .thermo import ThermoReport
from .optimize import Objective, OptimalPoint, TranscendentalConstants, optimal, solve_constants
from .entangle import ConcurrenceResult, concurrence_closed, concurrence_spectral
from .oracle import Trajectory, integrate_liouvillian, integrate_moments, reduced_battery_state

__all__ = [
    "BatteryError",
    "BlochState",
    "ConcurrenceResult",
    "ConvergenceError",
    "DegenerateObjectiveError",
    "IntegrationError",
    "InvalidStateError",
    "JointState",
    "MomentSet",
    "NotHermitianError",
    "NotPSDError",
    "Objective",
    "OptimalPoint",
    "QubitState",
    "RegimeError",
    "SystemParams",
    "ThermoReport",
    "Trajectory",
    "TranscendentalConstants",
    "concurrence_closed",
    "concurrence_spectral",
    "integrate_liouvillian",
    "integrate_moments",
    "optimal",
    "reduced_battery_state",
    "solve_constants",
]
