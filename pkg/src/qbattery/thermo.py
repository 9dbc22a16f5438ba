"""Ergotropy, antiergotropy and capacity of a single battery qubit.

Works on any :class:`~qbattery.model.QubitState`, whether it came from the
closed forms or from numerical integration. The dimensionless layer works
with the inversion I = n - 1/2 and coherence C = |<sb>|; ``omega_b`` only
enters when a :class:`ThermoReport` is assembled.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
import math

from . import smallmat
from .errors import InvalidStateError
from .model import QubitState

RADICAND_TOL = 1e-12


@dataclass(frozen=True)
class ThermoReport:
    energy: float
    passive_energy: float
    active_energy: float
    ergotropy: float
    antiergotropy: float
    capacity: float
    inversion: float
    coherence: float
    variance: float

    def as_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def passive_eigenvalues(q: QubitState) -> tuple[float, float]:
    """Eigenvalues (lambda_-, lambda_+) of the battery density matrix.

    lambda_+- = (1 +- sqrt(1 + 4|<sb>|^2 - 4 n (1 - n))) / 2
    """
    n = q.population
    rad = 1.0 + 4.0 * abs(q.coherence) ** 2 - 4.0 * n * (1.0 - n)
    if rad < -RADICAND_TOL:
        raise InvalidStateError(f"eigenvalue radicand {rad:.3e} is negative")
    root = math.sqrt(max(rad, 0.0))
    lo = 0.5 * (1.0 - root)
    # rad = (1 - 2n)^2 + 4|c|^2 cannot be negative beyond rounding; an
    # invalid input shows up as lambda_- < 0 instead
    if lo < -QubitState.TOL:
        raise InvalidStateError(f"negative passive eigenvalue {lo:.3e}")
    return max(lo, 0.0), 0.5 * (1.0 + root)


def inversion_coherence(q: QubitState) -> tuple[float, float]:
    return q.population - 0.5, abs(q.coherence)


def _ergotropy_unit(inv: float, coh: float, r: float) -> float:
    if inv >= 0.0:
        return inv + r
    # I + sqrt(I^2 + C^2) without cancellation when I < 0
    return coh * coh / (r - inv) if r > 0.0 else 0.0


def report(q: QubitState, omega_b: float) -> ThermoReport:
    """All single-qubit thermodynamic quantities from the (I, C) decomposition."""
    inv, coh = inversion_coherence(q)
    r = math.hypot(inv, coh)
    erg = omega_b * _ergotropy_unit(inv, coh, r)
    e = omega_b * q.population
    return ThermoReport(
        energy=e,
        passive_energy=e - erg,
        active_energy=omega_b * (0.5 + r),
        ergotropy=erg,
        antiergotropy=erg - 2.0 * omega_b * r,
        capacity=2.0 * omega_b * r,
        inversion=inv,
        coherence=coh,
        variance=omega_b**2 * q.population * (1.0 - q.population),
    )


def report_spectral(q: QubitState, omega_b: float) -> ThermoReport:
    """Same report built from the 2x2 eigenvalues; used as a cross-check."""
    lam = smallmat.eig_hermitian(q.density_matrix(), vectors=False).eigenvalues
    lo, hi = float(lam[0]), float(lam[1])
    e = omega_b * q.population
    passive, active = omega_b * lo, omega_b * hi
    return ThermoReport(
        energy=e,
        passive_energy=passive,
        active_energy=active,
        ergotropy=e - passive,
        antiergotropy=e - active,
        capacity=active - passive,
        inversion=q.population - 0.5,
        coherence=abs(q.coherence),
        variance=omega_b**2 * q.population * (1.0 - q.population),
    )


def ergotropy(q: QubitState, omega_b: float = 1.0) -> float:
    return report(q, omega_b).ergotropy
