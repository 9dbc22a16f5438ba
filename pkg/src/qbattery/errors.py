"""Exception hierarchy shared by every module of the package."""


class BatteryError(Exception):
    """Base class for all errors raised by :mod:`qbattery`."""


class NotHermitianError(BatteryError, ValueError):
    """A matrix expected to be Hermitian deviates beyond tolerance."""


class NotPSDError(BatteryError, ValueError):
    """A matrix expected to be positive semidefinite has a negative eigenvalue."""


class ConvergenceError(BatteryError, RuntimeError):
    """An iterative linear-algebra routine exhausted its iteration budget."""


class InvalidStateError(BatteryError, ValueError):
    """A quantum state violates trace, Hermiticity or positivity constraints."""


class RegimeError(BatteryError, ValueError):
    """Parameters fall outside the strong-coupling regime J > gamma/4."""


class DegenerateObjectiveError(BatteryError, ValueError):
    """The charging objective is identically zero (empty charger, theta = 0)."""


class IntegrationError(BatteryError, RuntimeError):
    """The ODE integrator could not reach the requested accuracy."""
