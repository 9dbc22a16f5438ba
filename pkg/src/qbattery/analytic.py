"""Closed-form dynamics, energetics and thermodynamics of the battery.

Every function takes the charger preparation ``b``, the parameters ``p``
and a time ``t`` (float or numpy array) and is a pure function of them.
The dissipative expressions are built from the damped amplitude

    f(t) = (J/G) sin(G t) exp(-gamma t / 4),     G = sqrt(J^2 - (gamma/4)^2),

which equals sin(J t) when gamma = 0, so one code path serves both cases.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .model import BlochState, SystemParams

# radicands this far below zero are treated as round-off
RADICAND_CLIP = 1e-14


@dataclass(frozen=True)
class MomentSet:
    """Battery/charger moments at one instant (or arrays over a time grid).

    ``<na sb>`` and ``<nb sa>`` vanish identically for this initial state and
    are not stored.
    """

    n_a: float
    n_b: float
    s_a: complex
    s_b: complex
    x_ab: complex

    @property
    def x_ba(self):
        return np.conj(self.x_ab)


def _half_angles(b: BlochState) -> tuple[float, float]:
    return math.sin(0.5 * b.theta), math.cos(0.5 * b.theta)


def _sin_theta(b: BlochState) -> float:
    s, c = _half_angles(b)
    return 2.0 * s * c


def _nonneg_sqrt(x):
    x = np.asarray(x, dtype=float)
    if np.any(x < -RADICAND_CLIP):
        raise ValueError(f"negative radicand {np.min(x):.3e}")
    return np.sqrt(np.clip(x, 0.0, None))


def _scalar(x):
    return x.item() if isinstance(x, np.ndarray) and x.ndim == 0 else x


def f_dissipative(p: SystemParams, t):
    """Damped charging amplitude (J/G) sin(G t) exp(-gamma t/4)."""
    G = p.G
    t = np.asarray(t, dtype=float)
    return _scalar((p.J / G) * np.sin(G * t) * np.exp(-0.25 * p.gamma * t))


def f_rate(p: SystemParams, t):
    """Time derivative of :func:`f_dissipative`."""
    G = p.G
    t = np.asarray(t, dtype=float)
    env = np.exp(-0.25 * p.gamma * t)
    return _scalar((p.J / G) * env * (G * np.cos(G * t) - 0.25 * p.gamma * np.sin(G * t)))


def charger_amplitude(p: SystemParams, t):
    """No-jump amplitude left on the charger, exp(-gamma t/4)(cos Gt - gamma/(4G) sin Gt)."""
    G = p.G
    t = np.asarray(t, dtype=float)
    env = np.exp(-0.25 * p.gamma * t)
    return _scalar(env * (np.cos(G * t) - (0.25 * p.gamma / G) * np.sin(G * t)))


def moments_lossless(b: BlochState, p: SystemParams, t) -> MomentSet:
    """Moments of the closed system (gamma = 0), as printed Rabi forms."""
    if p.gamma != 0.0:
        raise ValueError("moments_lossless requires gamma = 0; use moments_dissipative")
    t = np.asarray(t, dtype=float)
    s2 = b.excited_weight
    Jt = p.J * t
    rot = np.exp(1j * b.phi) * np.exp(-1j * p.omega_b * t)
    sin_th = math.sin(b.theta)
    return MomentSet(
        n_a=_scalar(s2 * np.cos(Jt) ** 2),
        n_b=_scalar(s2 * np.sin(Jt) ** 2),
        s_a=_scalar(0.5 * sin_th * np.cos(Jt) * rot),
        s_b=_scalar(-0.5j * sin_th * np.sin(Jt) * rot),
        x_ab=_scalar(-0.5j * s2 * np.sin(2.0 * Jt)),
    )


def moments_dissipative(b: BlochState, p: SystemParams, t) -> MomentSet:
    """Moments with charger decay, from the damped one-excitation amplitudes.

    The charger keeps amplitude ``a(t)`` (see :func:`charger_amplitude`) and the
    battery acquires ``-i f(t)``; quantum jumps only refill ``|00>``.
    """
    t = np.asarray(t, dtype=float)
    s, c = _half_angles(b)
    s2 = s * s
    amp_a = np.asarray(charger_amplitude(p, t))
    amp_b = -1j * np.asarray(f_dissipative(p, t))
    rot = np.exp(1j * b.phi) * np.exp(-1j * p.omega_b * t) * (s * c)
    return MomentSet(
        n_a=_scalar(s2 * amp_a**2),
        n_b=_scalar(s2 * np.abs(amp_b) ** 2),
        s_a=_scalar(rot * amp_a),
        s_b=_scalar(rot * amp_b),
        x_ab=_scalar(s2 * amp_b * amp_a),
    )


def moments(b: BlochState, p: SystemParams, t) -> MomentSet:
    if p.gamma == 0.0:
        return moments_lossless(b, p, t)
    return moments_dissipative(b, p, t)


def joint_state_matrix(b: BlochState, p: SystemParams, t: float) -> np.ndarray:
    """4x4 joint density matrix assembled from the closed-form moments."""
    m = moments(b, p, float(t))
    rho = np.zeros((4, 4), dtype=np.complex128)
    rho[0, 0] = 1.0 - m.n_a - m.n_b
    rho[1, 1] = m.n_a
    rho[2, 2] = m.n_b
    rho[1, 0] = m.s_a
    rho[0, 1] = np.conj(m.s_a)
    rho[2, 0] = m.s_b
    rho[0, 2] = np.conj(m.s_b)
    rho[2, 1] = m.x_ab
    rho[1, 2] = np.conj(m.x_ab)
    return rho


def energy(b: BlochState, p: SystemParams, t):
    """Stored energy omega_b sin^2(theta/2) f(t)^2."""
    f = np.asarray(f_dissipative(p, t))
    return _scalar(p.omega_b * b.excited_weight * f * f)


def power(b: BlochState, p: SystemParams, t):
    """Average charging power E/t, with the limit 0 at t = 0."""
    t = np.asarray(t, dtype=float)
    e = np.asarray(energy(b, p, t))
    out = np.divide(e, t, out=np.zeros_like(e), where=t > 0)
    return _scalar(out)


def variance(b: BlochState, p: SystemParams, t):
    """Energy variance omega_b^2 n_b (1 - n_b)."""
    n = np.asarray(energy(b, p, t)) / p.omega_b
    return _scalar(p.omega_b**2 * n * (1.0 - n))


def _radicand(b: BlochState, f2):
    # 1 - 4 s^4 f^2 (1 - f^2), rewritten as a sum of squares:
    # (1 - 2 s^2 f^2)^2 + sin^2(theta) f^2 = 4 (I^2 + C^2)
    s2 = b.excited_weight
    return (1.0 - 2.0 * s2 * f2) ** 2 + _sin_theta(b) ** 2 * f2


def _decomposition(b: BlochState, f2):
    """Inversion I, squared coherence C^2 and r = sqrt(I^2 + C^2) from f^2."""
    inv = b.excited_weight * f2 - 0.5
    coh2 = 0.25 * _sin_theta(b) ** 2 * f2
    r = 0.5 * _nonneg_sqrt(_radicand(b, f2))
    return inv, coh2, r


def _upper(inv, coh2, r):
    # I + r, avoiding cancellation when I < 0
    with np.errstate(divide="ignore", invalid="ignore"):
        alt = np.where(r - inv > 0, coh2 / (r - inv), 0.0)
    return np.where(inv >= 0, inv + r, alt)


def _lower(inv, coh2, r):
    # I - r, avoiding cancellation when I > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        alt = np.where(r + inv > 0, -coh2 / (r + inv), 0.0)
    return np.where(inv <= 0, inv - r, alt)


def ergotropy_closed(b: BlochState, p: SystemParams, t):
    """Ergotropy omega_b [s^2 f^2 - (1 - sqrt(1 - 4 s^4 f^2 (1 - f^2)))/2]."""
    f2 = np.asarray(f_dissipative(p, t)) ** 2
    return _scalar(p.omega_b * _upper(*_decomposition(b, f2)))


def capacity_closed(b: BlochState, p: SystemParams, t):
    """Capacity omega_b sqrt(1 - 4 s^4 f^2 (1 - f^2))."""
    f2 = np.asarray(f_dissipative(p, t)) ** 2
    return _scalar(p.omega_b * _nonneg_sqrt(_radicand(b, f2)))


def antiergotropy_closed(b: BlochState, p: SystemParams, t):
    f2 = np.asarray(f_dissipative(p, t)) ** 2
    return _scalar(p.omega_b * _lower(*_decomposition(b, f2)))


def passive_energy_closed(b: BlochState, p: SystemParams, t):
    f2 = np.asarray(f_dissipative(p, t)) ** 2
    return _scalar(p.omega_b * (0.5 - _decomposition(b, f2)[2]))


def inversion_coherence(b: BlochState, p: SystemParams, t):
    """Population inversion n_b - 1/2 and coherence magnitude |<sb>|."""
    f = np.asarray(f_dissipative(p, t))
    inv = b.excited_weight * f * f - 0.5
    coh = 0.5 * abs(_sin_theta(b)) * np.abs(f)
    return _scalar(inv), _scalar(coh)


def ergotropy_rate(b: BlochState, p: SystemParams, t):
    """d(ergotropy)/dt; at r = 0 (theta = pi kinks) the mean of both one-sided slopes."""
    f = np.asarray(f_dissipative(p, t))
    f2 = f * f
    s2 = b.excited_weight
    inv, coh2, r = _decomposition(b, f2)
    # d(I + r)/d(f^2) = (s^2 (I + r) + sin^2(theta)/8) / r
    with np.errstate(divide="ignore", invalid="ignore"):
        d_u = np.where(r > 0, (s2 * _upper(inv, coh2, r) + _sin_theta(b) ** 2 / 8.0) / r, s2)
    return _scalar(p.omega_b * d_u * 2.0 * f * np.asarray(f_rate(p, t)))


def energy_rate(b: BlochState, p: SystemParams, t):
    f = np.asarray(f_dissipative(p, t))
    return _scalar(2.0 * p.omega_b * b.excited_weight * f * np.asarray(f_rate(p, t)))


def concurrence_formula(b: BlochState, p: SystemParams, t):
    """sin^2(theta/2) |sin(2 J t)| (closed system only)."""
    if p.gamma != 0.0:
        raise ValueError("closed-form concurrence is only available for gamma = 0")
    t = np.asarray(t, dtype=float)
    return _scalar(b.excited_weight * np.abs(np.sin(2.0 * p.J * t)))
