"""Parameters, initial states and generators of the charger-battery qubit pair.

Basis order for the joint space is ``|0>a|0>b, |1>a|0>b, |0>a|1>b, |1>a|1>b``
(charger excitation before battery excitation), so index = a + 2*b.
Units: hbar = 1; all rates share the unit of ``J``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

from . import smallmat
from .errors import InvalidStateError, RegimeError

TWO_PI = 2.0 * math.pi

_LOWER = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=np.complex128)
_I2 = np.eye(2, dtype=np.complex128)

#: lowering operator of the charger qubit a
SIGMA_A = np.kron(_I2, _LOWER)
#: lowering operator of the battery qubit b
SIGMA_B = np.kron(_LOWER, _I2)
#: total excitation number n_a + n_b
NUMBER = SIGMA_A.conj().T @ SIGMA_A + SIGMA_B.conj().T @ SIGMA_B


@dataclass(frozen=True)
class BlochState:
    """Charger preparation cos(theta/2)|0> + exp(i phi) sin(theta/2)|1>."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        theta = float(self.theta)
        if not (0.0 <= theta <= math.pi):
            raise ValueError(f"theta must lie in [0, pi], got {theta!r}")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", float(self.phi) % TWO_PI)

    @property
    def excited_weight(self) -> float:
        """sin^2(theta/2), the initial charger population."""
        return math.sin(0.5 * self.theta) ** 2


@dataclass(frozen=True)
class SystemParams:
    """Transition frequency ``omega_b``, coupling ``J`` and charger decay ``gamma``."""

    omega_b: float = 1.0
    J: float = 1.0
    gamma: float = 0.0

    def __post_init__(self):
        if not self.omega_b > 0:
            raise ValueError(f"omega_b must be positive, got {self.omega_b!r}")
        if not self.J > 0:
            raise ValueError(f"J must be positive, got {self.J!r}")
        if not self.gamma >= 0:
            raise ValueError(f"gamma must be non-negative, got {self.gamma!r}")

    @property
    def strong_coupling(self) -> bool:
        return self.J > self.gamma / 4.0

    @property
    def G(self) -> float:
        """Damped Rabi frequency sqrt(J^2 - (gamma/4)^2)."""
        self.require_strong_coupling()
        if self.gamma == 0.0:
            return self.J
        return math.sqrt(self.J**2 - (self.gamma / 4.0) ** 2)

    def require_strong_coupling(self) -> None:
        if not self.strong_coupling:
            raise RegimeError(
                f"strong coupling J > gamma/4 required (J={self.J}, gamma={self.gamma})"
            )

    def lossless(self) -> "SystemParams":
        return SystemParams(self.omega_b, self.J, 0.0)


@dataclass(frozen=True)
class QubitState:
    """Reduced battery state as (population <sb^+ sb>, coherence <sb>)."""

    population: float
    coherence: complex = 0.0

    TOL = 1e-10

    def __post_init__(self):
        n = float(self.population)
        c = complex(self.coherence)
        if not (-self.TOL <= n <= 1.0 + self.TOL):
            raise InvalidStateError(f"population {n!r} outside [0, 1]")
        if abs(c) ** 2 > n * (1.0 - n) + self.TOL:
            raise InvalidStateError(
                f"|coherence|^2 = {abs(c) ** 2:.3e} exceeds n(1-n) = {n * (1 - n):.3e}"
            )
        object.__setattr__(self, "population", n)
        object.__setattr__(self, "coherence", c)

    def density_matrix(self) -> np.ndarray:
        """2x2 density matrix in the (excited, ground) ordering."""
        n, c = self.population, self.coherence
        return np.array([[n, c], [np.conj(c), 1.0 - n]], dtype=np.complex128)


@dataclass(frozen=True)
class JointState:
    """Two-qubit density matrix in the fixed basis order of this module."""

    rho: np.ndarray = field(repr=False)

    TRACE_TOL = 1e-10
    HERMITIAN_TOL = 1e-10
    POSITIVITY_TOL = 1e-8

    def __post_init__(self):
        rho = smallmat.as_cmatrix(self.rho)
        if rho.shape != (4, 4):
            raise InvalidStateError(f"joint state must be 4x4, got {rho.shape}")
        defect = smallmat.hermiticity_defect(rho)
        if defect > self.HERMITIAN_TOL:
            raise InvalidStateError(f"rho not Hermitian (defect {defect:.3e})")
        tr = np.trace(rho)
        if abs(tr - 1.0) > self.TRACE_TOL:
            raise InvalidStateError(f"trace {tr:.12g} differs from 1")
        rho = 0.5 * (rho + rho.conj().T)
        lam_min = smallmat.eig_hermitian(rho, vectors=False).eigenvalues[0]
        if lam_min < -self.POSITIVITY_TOL:
            raise InvalidStateError(f"rho has negative eigenvalue {lam_min:.3e}")
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    def purity(self) -> float:
        return float(np.trace(self.rho @ self.rho).real)


def initial_joint_state(b: BlochState) -> JointState:
    """Product state |alpha>_a |0>_b."""
    psi = np.zeros(4, dtype=np.complex128)
    psi[0] = math.cos(0.5 * b.theta)
    psi[1] = np.exp(1j * b.phi) * math.sin(0.5 * b.theta)
    return JointState(np.outer(psi, psi.conj()))


def hamiltonian(p: SystemParams, J: float | None = None) -> np.ndarray:
    """H = omega_b (na + nb) + J (sa^+ sb + sb^+ sa).

    ``J`` overrides the coupling of ``p``; it exists so that verification
    fixtures can build a deliberately wrong generator.
    """
    coupling = p.J if J is None else J
    h = np.diag([0.0, p.omega_b, p.omega_b, 2.0 * p.omega_b]).astype(np.complex128)
    h[1, 2] = h[2, 1] = coupling
    return h


def liouvillian(p: SystemParams, h: np.ndarray | None = None) -> np.ndarray:
    """16x16 GKSL generator acting on column-stacked vec(rho).

    d rho/dt = -i[H, rho] + (gamma/2)(2 sa rho sa^+ - sa^+ sa rho - rho sa^+ sa)
    """
    if h is None:
        h = hamiltonian(p)
    eye = np.eye(4, dtype=np.complex128)
    # column stacking: vec(A X B) = (B^T kron A) vec(X)
    gen = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    if p.gamma > 0.0:
        s = SIGMA_A
        ss = s.conj().T @ s
        gen += 0.5 * p.gamma * (
            2.0 * np.kron(s.conj(), s) - np.kron(eye, ss) - np.kron(ss.T, eye)
        )
    return gen


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho).reshape(-1, order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    return np.asarray(v).reshape(4, 4, order="F")


def moment_generator_second(p: SystemParams) -> np.ndarray:
    """Generator of i d/dt (<na>, <nb>, <sa^+ sb>, <sb^+ sa>)."""
    J = p.J
    m = np.array(
        [
            [0, 0, J, -J],
            [0, 0, -J, J],
            [J, -J, 0, 0],
            [-J, J, 0, 0],
        ],
        dtype=np.complex128,
    )
    if p.gamma > 0.0:
        m[0, 0] -= 1j * p.gamma
        m[2, 2] -= 0.5j * p.gamma
        m[3, 3] -= 0.5j * p.gamma
    return m


def moment_generator_first(p: SystemParams) -> np.ndarray:
    """Generator of i d/dt (<sa>, <sb>, <na sb>, <nb sa>)."""
    J, w = p.J, p.omega_b
    m = np.array(
        [
            [w, J, -2 * J, 0],
            [J, w, 0, -2 * J],
            [0, 0, w, -J],
            [0, 0, -J, w],
        ],
        dtype=np.complex128,
    )
    if p.gamma > 0.0:
        m[0, 0] -= 0.5j * p.gamma
        m[2, 2] -= 1j * p.gamma
        m[3, 3] -= 0.5j * p.gamma
    return m
