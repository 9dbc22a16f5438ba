"""Wootters concurrence of the charger-battery state."""

from __future__ import annotations

from dataclasses import dataclass
import enum

import numpy as np

from . import analytic, smallmat
from .model import BlochState, JointState, SystemParams

IMAG_TOL = 1e-8

_SIGMA_Y = np.array([[0.0, -1j], [1j, 0.0]])
#: spin flip sigma_y (x) sigma_y; symmetric under exchange of the tensor
#: factors, so it is the same matrix in either qubit ordering
SPIN_FLIP = np.kron(_SIGMA_Y, _SIGMA_Y)


class Route(str, enum.Enum):
    CLOSED_FORM = "closed_form"
    SPECTRAL = "spectral"


@dataclass(frozen=True)
class ConcurrenceResult:
    value: float
    route: Route

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"concurrence {self.value!r} outside [0, 1]")


def spin_flipped(rho: np.ndarray) -> np.ndarray:
    """rho~ = (sy x sy) rho* (sy x sy)."""
    return SPIN_FLIP @ rho.conj() @ SPIN_FLIP


def wootters_lambdas(j: JointState) -> np.ndarray:
    """Descending eigenvalues of R = sqrt(sqrt(rho) rho~ sqrt(rho)).

    They equal the singular values of sqrt(rho) (sy x sy) sqrt(rho)*, which
    are read off without squaring, so small lambdas keep full accuracy.
    """
    root = smallmat.sqrt_psd(j.rho)
    return smallmat.singular_values(root @ SPIN_FLIP @ root.conj())


def wootters_lambdas_product(j: JointState) -> np.ndarray:
    """Square roots of the eigenvalues of rho rho~ (general 4x4 eigensolver).

    Mathematically equal to :func:`wootters_lambdas` but limited to about
    sqrt(machine epsilon) accuracy for vanishing lambdas; kept as a diagnostic.
    """
    ev = smallmat.eigvals_general4(j.rho @ spin_flipped(j.rho))
    if np.max(np.abs(ev.imag)) > IMAG_TOL:
        raise ValueError(f"rho rho~ has complex eigenvalues (|Im| = {np.max(np.abs(ev.imag)):.2e})")
    return np.sort(np.sqrt(np.clip(ev.real, 0.0, None)))[::-1]


def _from_lambdas(lam: np.ndarray) -> float:
    return float(min(1.0, max(0.0, lam[0] - lam[1] - lam[2] - lam[3])))


def concurrence_spectral(j: JointState) -> ConcurrenceResult:
    """C = max(0, l1 - l2 - l3 - l4) from the spectrum of R."""
    return ConcurrenceResult(_from_lambdas(wootters_lambdas(j)), Route.SPECTRAL)


def concurrence_closed(b: BlochState, p: SystemParams, t: float) -> ConcurrenceResult:
    """sin^2(theta/2) |sin(2 J t)|; defined for the lossless system only."""
    if p.gamma != 0.0:
        raise ValueError("closed-form concurrence requires gamma = 0")
    return ConcurrenceResult(float(analytic.concurrence_formula(b, p, t)), Route.CLOSED_FORM)
