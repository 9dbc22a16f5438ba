"""Transcendental constants, optimal charging times and the sigmoid approximants.

Times returned here are in the unit of 1/J implied by ``SystemParams``.
"""

from __future__ import annotations

from dataclasses import dataclass
import enum
import math
from typing import Callable

import numpy as np

from . import analytic
from .errors import DegenerateObjectiveError
from .model import BlochState, SystemParams

SCAN_POINTS = 4096
GOLDEN_TOL = 1e-7
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
# values below this fraction of the scan maximum count as plateau noise
PLATEAU_FRACTION = 1e-12


def bisect(fn: Callable[[float], float], lo: float, hi: float, width: float = 0.0) -> float:
    """Root of ``fn`` in ``[lo, hi]`` given a sign change.

    Halves until the bracket is narrower than ``width`` or, with the default
    ``width = 0``, until the midpoint no longer moves in floating point.
    """
    f_lo = fn(lo)
    f_hi = fn(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        raise ValueError(f"no sign change on [{lo}, {hi}]")
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        f_mid = fn(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class TranscendentalConstants:
    A: float
    B: float
    C: float
    D: float
    K: float
    L: float

    def residuals(self) -> dict[str, float]:
        """Residuals of the defining equations of A and C."""
        return {
            "A": abs(math.tan(self.A) - 2.0 * self.A),
            "C": abs(1.0 + 2.0 * self.C * math.tan(2.0 * self.C)),
        }

    def as_dict(self) -> dict[str, float]:
        return {k: getattr(self, k) for k in "ABCDKL"}


def solve_constants() -> TranscendentalConstants:
    """Solve tan A = 2A and 1 + 2C tan 2C = 0 and derive B, D, K, L.

    Both equations are bisected in pole-free form on fixed brackets:
    sin A - 2A cos A on [pi/4, pi/2] and cos 2C + 2C sin 2C on [pi/4, pi/2].
    """
    a = bisect(lambda x: math.sin(x) - 2.0 * x * math.cos(x), 0.25 * math.pi, 0.5 * math.pi)
    c = bisect(
        lambda x: math.cos(2.0 * x) + 2.0 * x * math.sin(2.0 * x), 0.25 * math.pi, 0.5 * math.pi
    )
    # K = -A tan(2A)/4 with tan(2A) = 4A/(1 - 4A^2) from tan A = 2A
    k = a * a / (4.0 * a * a - 1.0)
    return TranscendentalConstants(
        A=a,
        B=math.sin(a) ** 2 / a,
        C=c,
        D=-math.cos(2.0 * c) / c,
        K=k,
        L=k / a,
    )


CONSTANTS = solve_constants()


class Objective(str, enum.Enum):
    ENERGY = "energy"
    POWER = "power"
    ERGOTROPY = "ergotropy"
    ERGOTROPIC_POWER = "ergotropic_power"


@dataclass(frozen=True)
class OptimalPoint:
    t_star: float
    value: float
    objective: Objective


def _per_time(fn, dfn):
    """Wrap a quantity q(t) into q/t and its derivative, with limit 0 at t = 0."""

    def value(t):
        t = np.asarray(t, dtype=float)
        q = np.asarray(fn(t))
        return np.divide(q, t, out=np.zeros_like(q), where=t > 0)

    def rate(t):
        return (dfn(t) * t - fn(t)) / (t * t)

    return value, rate


def objective_functions(objective: Objective, b: BlochState, p: SystemParams):
    """(value, derivative) callables of time for one objective."""
    objective = Objective(objective)
    energy = lambda t: analytic.energy(b, p, t)
    d_energy = lambda t: analytic.energy_rate(b, p, t)
    erg = lambda t: analytic.ergotropy_closed(b, p, t)
    d_erg = lambda t: analytic.ergotropy_rate(b, p, t)
    if objective is Objective.ENERGY:
        return energy, d_energy
    if objective is Objective.POWER:
        return _per_time(energy, d_energy)
    if objective is Objective.ERGOTROPY:
        return erg, d_erg
    return _per_time(erg, d_erg)


def _limit_functions(objective: Objective, p: SystemParams):
    # shapes of the objectives as theta -> 0: energy and ergotropy both go
    # as f(t)^2 (times a vanishing prefactor), the power variants as f^2/t
    sq = lambda t: np.asarray(analytic.f_dissipative(p, t)) ** 2
    d_sq = lambda t: 2.0 * np.asarray(analytic.f_dissipative(p, t)) * analytic.f_rate(p, t)
    if objective in (Objective.ENERGY, Objective.ERGOTROPY):
        return sq, d_sq
    return _per_time(sq, d_sq)


def first_local_max(
    fn: Callable, dfn: Callable | None, t_end: float, n_scan: int = SCAN_POINTS
) -> float:
    """Location of the first local maximum of ``fn`` on (0, t_end].

    A coarse scan brackets the first strict rise followed by a fall, ignoring
    plateaus at the noise floor; golden-section search narrows the bracket and
    bisection on the sign of ``dfn`` (when given) polishes the result.
    """
    grid = np.linspace(0.0, t_end, n_scan + 1)
    vals = np.asarray(fn(grid), dtype=float)
    floor = PLATEAU_FRACTION * float(np.max(np.abs(vals)))
    k_star = None
    for k in range(1, n_scan):
        rising = vals[k] - vals[k - 1] > floor
        if rising and vals[k] >= vals[k + 1] and vals[k] > floor:
            k_star = k
            break
    if k_star is None:
        # still rising at the end of the scan window
        k_star = n_scan - 1 if vals[-1] > vals[-2] else int(np.argmax(vals))
    lo, hi = grid[max(k_star - 1, 0)], grid[min(k_star + 1, n_scan)]

    f = lambda t: float(fn(t))
    x1 = hi - _INV_PHI * (hi - lo)
    x2 = lo + _INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > GOLDEN_TOL * max(1.0, hi):
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INV_PHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INV_PHI * (hi - lo)
            f2 = f(x2)
    t_star = x1 if f1 >= f2 else x2
    if dfn is not None:
        d = lambda t: float(dfn(t))
        if d(lo) > 0.0 > d(hi):
            t_star = bisect(d, lo, hi)
    return float(t_star)


def scan_window(p: SystemParams) -> float:
    return 2.0 * math.pi / p.G


def optimal(objective: Objective | str, b: BlochState, p: SystemParams) -> OptimalPoint:
    """First local maximum in time of the chosen charging objective.

    Raises:
        DegenerateObjectiveError: for theta = 0, where every objective is
            identically zero (see :func:`optimal_theta_zero_limit`).
        RegimeError: outside the strong-coupling regime.
    """
    objective = Objective(objective)
    t_end = scan_window(p)
    if b.theta == 0.0:
        raise DegenerateObjectiveError(
            f"{objective.value} is identically zero at theta = 0; no maximum exists"
        )
    fn, dfn = objective_functions(objective, b, p)
    t_star = first_local_max(fn, dfn, t_end)
    return OptimalPoint(t_star, float(fn(t_star)), objective)


def optimal_theta_zero_limit(objective: Objective | str, p: SystemParams) -> OptimalPoint:
    """theta -> 0+ limit of :func:`optimal`: limiting argmax, value 0."""
    objective = Objective(objective)
    fn, dfn = _limit_functions(objective, p)
    return OptimalPoint(first_local_max(fn, dfn, scan_window(p)), 0.0, objective)


# closed-form optima with charger decay


def t_energy_exact(p: SystemParams) -> float:
    """arctan(4G/gamma)/G; reduces to pi/(2J) at gamma = 0."""
    G = p.G
    return math.atan2(4.0 * G, p.gamma) / G


def peak_energy_exact(b: BlochState, p: SystemParams) -> float:
    G = p.G
    return p.omega_b * b.excited_weight * math.exp(-(p.gamma / (2.0 * G)) * math.atan2(4.0 * G, p.gamma))


def t_energy_first_order(p: SystemParams) -> float:
    return (math.pi / (2.0 * p.J)) * (1.0 - p.gamma / (2.0 * math.pi * p.J))


def peak_energy_first_order(b: BlochState, p: SystemParams) -> float:
    return p.omega_b * b.excited_weight * (1.0 - math.pi * p.gamma / (4.0 * p.J))


def t_power_exact(p: SystemParams) -> float:
    """Root x = G t_P of (1 + gamma x / 2G) tan x = 2x, divided by G."""
    G = p.G
    g = p.gamma / (2.0 * G)
    h = lambda x: (1.0 + g * x) * math.sin(x) - 2.0 * x * math.cos(x)
    return bisect(h, 1e-9, 0.5 * math.pi) / G


def peak_power_exact(b: BlochState, p: SystemParams) -> float:
    return float(analytic.power(b, p, t_power_exact(p)))


def t_power_first_order(p: SystemParams) -> float:
    c = CONSTANTS
    return (c.A / p.J) * (1.0 - c.L * p.gamma / p.J)


def peak_power_first_order(b: BlochState, p: SystemParams) -> float:
    c = CONSTANTS
    return c.B * p.omega_b * p.J * b.excited_weight * (1.0 - 0.5 * c.A * p.gamma / p.J)


# sigmoid approximants for the ergotropic-power optimum

_K_SIG = 9.0 * math.sqrt(3.0) / 32.0


def approx_t_ergotropic_power(theta: float) -> float:
    """Approximate J t at the ergotropic-power peak: 7/6 at theta = 0, 7/5 at pi."""
    if not 0.0 <= theta <= math.pi:
        raise ValueError(f"theta must lie in [0, pi], got {theta!r}")
    num = 5.0 / 6.0 + (1.0 / 6.0 + _K_SIG * math.pi**2.5) * (theta / math.pi) ** 2.5
    return 1.4 * num / (1.0 + _K_SIG * theta**2.5)


def approx_peak_ergotropic_power(theta: float) -> float:
    """Approximate peak ergotropic power in units of omega_b J: 0, 1/3, 2/3 at 0, pi/2, pi."""
    if not 0.0 <= theta <= math.pi:
        raise ValueError(f"theta must lie in [0, pi], got {theta!r}")
    return (math.tanh(theta - 0.5 * math.pi) / math.tanh(0.5 * math.pi) + 1.0) / 3.0


def approximant_errors(thetas, p: SystemParams | None = None) -> dict[str, float]:
    """Largest deviation of both approximants from the exact lossless optimum on a grid."""
    p = SystemParams() if p is None else p.lossless()
    t_err = 0.0
    v_err = 0.0
    for th in thetas:
        if th == 0.0:
            opt = optimal_theta_zero_limit(Objective.ERGOTROPIC_POWER, p)
        else:
            opt = optimal(Objective.ERGOTROPIC_POWER, BlochState(th), p)
        t_err = max(t_err, abs(approx_t_ergotropic_power(th) - opt.t_star * p.J))
        v_err = max(v_err, abs(approx_peak_ergotropic_power(th) - opt.value / (p.omega_b * p.J)))
    return {"t_star": t_err, "value": v_err}
