"""Numerical reference solutions used to validate the closed forms.

Two independent paths are provided:

* the full 16-dimensional GKSL equation for vec(rho), integrated with the
  classical fourth-order Runge-Kutta scheme;
* the 4-dimensional moment equations i dPsi/dt = H Psi and i dpsi/dt = M psi,
  integrated the same way or propagated with a Pade matrix exponential.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math
from typing import Callable, Literal

import numpy as np

from . import model, smallmat
from .analytic import MomentSet
from .errors import IntegrationError
from .model import BlochState, JointState, QubitState, SystemParams

# RK4 steps per unit of the fastest rate; the global error then stays well
# below 1e-10 over tens of Rabi periods
STEPS_PER_RATE = 800
ADAPTIVE_TOL = 1e-10


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution of one of the oracle equations.

    ``states`` has shape ``(n_samples, 4, 4)`` for joint density matrices
    (kind ``"joint"``) or ``(n_samples, 4)`` for moment vectors (kinds
    ``"first"`` and ``"second"``).
    """

    times: np.ndarray
    states: np.ndarray
    kind: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("trajectory times must be strictly increasing")
        self.times.setflags(write=False)
        self.states.setflags(write=False)

    def __len__(self):
        return len(self.times)

    def joint_states(self) -> list[JointState]:
        if self.kind != "joint":
            raise ValueError(f"{self.kind!r} trajectory carries no density matrices")
        return [JointState(r) for r in self.states]


def rk4_step(rhs: Callable[[float, np.ndarray], np.ndarray], t: float, y: np.ndarray, h: float) -> np.ndarray:
    k1 = rhs(t, y)
    k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = rhs(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate_linear(
    gen: np.ndarray,
    y0: np.ndarray,
    times: np.ndarray,
    h_max: float,
    adaptive: bool = False,
    tol: float = ADAPTIVE_TOL,
) -> tuple[np.ndarray, dict]:
    """Integrate dy/dt = gen @ y, returning y at each of ``times``.

    Fixed mode splits every sampling interval into equal RK4 steps no longer
    than ``h_max``. Adaptive mode uses step doubling with the local error
    estimate |y_h/2 - y_h| / 15 held below ``tol``.
    """
    rhs = lambda _t, y: gen @ y
    times = np.asarray(times, dtype=float)
    out = np.empty((len(times), len(y0)), dtype=np.complex128)
    y = np.array(y0, dtype=np.complex128)
    out[0] = y
    t_span = float(times[-1] - times[0]) or 1.0
    h_min = 1e-12 * t_span
    steps = 0
    rejected = 0
    h = h_max
    for i in range(1, len(times)):
        t0, t1 = float(times[i - 1]), float(times[i])
        if not adaptive:
            n = max(1, math.ceil((t1 - t0) / h_max - 1e-12))
            hs = (t1 - t0) / n
            for k in range(n):
                y = rk4_step(rhs, t0 + k * hs, y, hs)
            steps += n
        else:
            t = t0
            while t < t1:
                h = min(h, t1 - t)
                if h < h_min and t1 - t > h_min:
                    raise IntegrationError(
                        f"step size {h:.3e} underflowed at t = {t:.6g} (limit {h_min:.3e})"
                    )
                full = rk4_step(rhs, t, y, h)
                half = rk4_step(rhs, t + 0.5 * h, rk4_step(rhs, t, y, 0.5 * h), 0.5 * h)
                err = float(np.max(np.abs(half - full))) / 15.0
                scale = max(1.0, float(np.max(np.abs(half))))
                if err <= tol * scale:
                    t += h
                    y = half + (half - full) / 15.0
                    steps += 1
                    grow = 2.0 if err == 0.0 else min(2.0, 0.9 * (tol * scale / err) ** 0.2)
                    h = min(h_max, h * max(grow, 1.0))
                else:
                    rejected += 1
                    h *= max(0.2, 0.9 * (tol * scale / err) ** 0.2)
                    if h < h_min:
                        raise IntegrationError(
                            f"step size {h:.3e} underflowed at t = {t:.6g} (limit {h_min:.3e})"
                        )
        out[i] = y
    meta = {
        "method": "rk4-adaptive" if adaptive else "rk4",
        "h_max": h_max,
        "steps": steps,
        "rejected": rejected,
    }
    if adaptive:
        meta["tol"] = tol
    return out, meta


def default_step(p: SystemParams, t_max: float, n_samples: int, adaptive: bool = False) -> float:
    """Step cap: fine fixed steps, or one sampling interval for adaptive mode."""
    interval = t_max / max(n_samples - 1, 1)
    if adaptive:
        return interval
    rate = max(p.J, p.omega_b, p.gamma)
    return min(1.0 / (STEPS_PER_RATE * rate), interval)


def _time_grid(t_max: float, n_samples: int) -> np.ndarray:
    if n_samples < 2:
        raise ValueError("n_samples must be at least 2")
    if not t_max > 0:
        raise ValueError("t_max must be positive")
    return np.arange(n_samples) * t_max / (n_samples - 1)


def integrate_liouvillian(
    b: BlochState,
    p: SystemParams,
    t_max: float,
    n_samples: int,
    *,
    h_max: float | None = None,
    adaptive: bool = False,
    generator: np.ndarray | None = None,
) -> Trajectory:
    """Integrate the GKSL equation from |alpha>|0> and sample rho(t).

    ``generator`` replaces the 16x16 Liouvillian of ``p`` (used by the
    mutation fixtures of the verify suite).
    """
    times = _time_grid(t_max, n_samples)
    gen = model.liouvillian(p) if generator is None else generator
    h = default_step(p, t_max, n_samples, adaptive) if h_max is None else h_max
    rho0 = model.initial_joint_state(b).rho
    vecs, meta = integrate_linear(gen, model.vec(rho0), times, h, adaptive=adaptive)
    states = np.stack([model.unvec(v) for v in vecs])
    states = 0.5 * (states + states.conj().transpose(0, 2, 1))
    for r in states:
        JointState(r)  # trace / Hermiticity / positivity at every sample
    return Trajectory(times, states, "joint", meta)


def initial_moments(which: Literal["first", "second"], b: BlochState) -> np.ndarray:
    if which == "second":
        return np.array([b.excited_weight, 0, 0, 0], dtype=np.complex128)
    if which == "first":
        return np.array([0.5 * np.exp(1j * b.phi) * math.sin(b.theta), 0, 0, 0], dtype=np.complex128)
    raise ValueError(f"unknown moment family {which!r}")


def moment_generator(which: str, p: SystemParams) -> np.ndarray:
    if which == "second":
        return model.moment_generator_second(p)
    if which == "first":
        return model.moment_generator_first(p)
    raise ValueError(f"unknown moment family {which!r}")


def integrate_moments(
    which: Literal["first", "second"],
    b: BlochState,
    p: SystemParams,
    t_max: float,
    n_samples: int,
    *,
    h_max: float | None = None,
    adaptive: bool = False,
) -> Trajectory:
    """Integrate i d/dt v = G v for the first- or second-moment vector."""
    times = _time_grid(t_max, n_samples)
    gen = -1j * moment_generator(which, p)
    h = default_step(p, t_max, n_samples, adaptive) if h_max is None else h_max
    vals, meta = integrate_linear(gen, initial_moments(which, b), times, h, adaptive=adaptive)
    return Trajectory(times, vals, which, meta)


def propagate_moments_expm(
    which: Literal["first", "second"], b: BlochState, p: SystemParams, times
) -> np.ndarray:
    """Moment vectors exp(-i G t) v(0) at each time, via the Pade exponential."""
    gen = moment_generator(which, p)
    v0 = initial_moments(which, b)
    return np.stack([smallmat.expm(-1j * gen * float(t)) @ v0 for t in np.atleast_1d(times)])


def moments_from_joint(rho: np.ndarray) -> MomentSet:
    """Read the five moments off a joint density matrix."""
    return MomentSet(
        n_a=float((rho[1, 1] + rho[3, 3]).real),
        n_b=float((rho[2, 2] + rho[3, 3]).real),
        s_a=complex(rho[1, 0] + rho[3, 2]),
        s_b=complex(rho[2, 0] + rho[3, 1]),
        x_ab=complex(rho[2, 1]),
    )


def moments_from_vectors(first: np.ndarray, second: np.ndarray) -> MomentSet:
    """Combine a first-moment and a second-moment vector into a MomentSet."""
    return MomentSet(
        n_a=float(second[0].real),
        n_b=float(second[1].real),
        s_a=complex(first[0]),
        s_b=complex(first[1]),
        x_ab=complex(second[2]),
    )


def reduced_battery_state(j: JointState | np.ndarray) -> QubitState:
    """Partial trace over the charger: (<sb^+ sb>, <sb>) = (tr rho nb, tr rho sb)."""
    rho = j.rho if isinstance(j, JointState) else np.asarray(j)
    n = float((rho[2, 2] + rho[3, 3]).real)
    return QubitState(min(max(n, 0.0), 1.0), complex(rho[2, 0] + rho[3, 1]))
