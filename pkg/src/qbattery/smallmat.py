"""Dense complex linear algebra for the small fixed dimensions used here.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. The routines
below are written out by hand (closed-form 2x2, cyclic Jacobi, shifted
Hessenberg QR, Pade scaling-and-squaring) so their behaviour is fully
deterministic and independent of the LAPACK build.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .errors import ConvergenceError, NotHermitianError, NotPSDError

HERMITIAN_TOL = 1e-12
JACOBI_TOL = 1e-13
PSD_CLIP = 1e-10
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class Spectrum:
    """Ascending real eigenvalues and (optionally) eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None

    def reconstruct(self) -> np.ndarray:
        if self.eigenvectors is None:
            raise ValueError("spectrum carries no eigenvectors")
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_cmatrix(m) -> np.ndarray:
    a = np.array(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def inf_norm(m: np.ndarray) -> float:
    """Largest absolute entry (the entrywise infinity norm)."""
    return float(np.max(np.abs(m))) if m.size else 0.0


def hermiticity_defect(m: np.ndarray) -> float:
    return inf_norm(m - m.conj().T)


def check_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> None:
    defect = hermiticity_defect(m)
    if defect > tol:
        raise NotHermitianError(
            f"matrix is not Hermitian: max|M - M^H| = {defect:.3e} > {tol:.1e}"
        )


def _rotation(app: float, aqq: float, apq: complex) -> tuple[float, float, np.ndarray]:
    """Jacobi rotation U with (U^H A U)[p, q] = 0 for the 2x2 block [[app, apq], [apq*, aqq]].

    Returns the two new diagonal entries and U. Written with hypot so that
    neither tiny nor huge off-diagonal entries overflow.
    """
    r = abs(apq)
    if r == 0.0:
        return app, aqq, np.eye(2, dtype=np.complex128)
    tau = (aqq - app) / (2.0 * r)
    t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
    c = 1.0 / math.hypot(1.0, t)
    s = t * c
    ph = np.conj(apq) / r
    u = np.array([[c, s], [-s * ph, c * ph]], dtype=np.complex128)
    return app - t * r, aqq + t * r, u


def _eig2(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    lo, hi, u = _rotation(m[0, 0].real, m[1, 1].real, m[0, 1])
    return np.array([lo, hi]), u


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def _jacobi(m: np.ndarray, tol: float, max_sweeps: int = 60) -> tuple[np.ndarray, np.ndarray]:
    a = m.copy()
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = max(1.0, float(np.linalg.norm(a)))
    converged_once = False
    for _ in range(max_sweeps):
        off = _off_norm(a)
        if off <= tol * scale:
            # one polishing sweep after reaching tolerance; quadratic
            # convergence then drives the residual to rounding level
            if converged_once or off == 0.0:
                break
            converged_once = True
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                if r < _EPS * 1e-3 * (abs(app) + abs(aqq)):
                    a[p, q] = a[q, p] = 0.0
                    continue
                _, _, u = _rotation(app, aqq, apq)
                idx = [p, q]
                a[:, idx] = a[:, idx] @ u
                a[idx, :] = u.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, idx] = v[:, idx] @ u
    else:
        if _off_norm(a) > tol * scale:
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps (off-norm {_off_norm(a):.3e})"
            )
    return np.diag(a).real.copy(), v


def eig_hermitian(m, tol: float = JACOBI_TOL, vectors: bool = True) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix.

    Closed form for 2x2 input, cyclic Jacobi sweeps otherwise. Eigenvalues
    are returned in ascending order with matching eigenvector columns.

    Raises:
        NotHermitianError: if ``max|M - M^H|`` exceeds ``1e-12``.
    """
    a = as_cmatrix(m)
    check_hermitian(a)
    a = 0.5 * (a + a.conj().T)
    if a.shape[0] == 1:
        vals, vecs = np.array([a[0, 0].real]), np.ones((1, 1), dtype=np.complex128)
    elif a.shape[0] == 2:
        vals, vecs = _eig2(a)
    else:
        vals, vecs = _jacobi(a, tol)
    order = np.argsort(vals, kind="stable")
    vals = vals[order]
    vecs = vecs[:, order]
    return Spectrum(vals, vecs if vectors else None)


def _hessenberg(a: np.ndarray) -> np.ndarray:
    h = a.copy()
    n = h.shape[0]
    for k in range(n - 2):
        x = h[k + 1 :, k].copy()
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        x[0] += phase * alpha
        x /= np.linalg.norm(x)
        h[k + 1 :, :] -= 2.0 * np.outer(x, x.conj() @ h[k + 1 :, :])
        h[:, k + 1 :] -= 2.0 * np.outer(h[:, k + 1 :] @ x, x.conj())
    return h


def _qr_step(b: np.ndarray, mu: complex) -> None:
    k = b.shape[0]
    b -= mu * np.eye(k)
    rots = []
    for j in range(k - 1):
        x, y = b[j, j], b[j + 1, j]
        r = math.hypot(abs(x), abs(y))
        if r == 0.0:
            g = np.eye(2, dtype=np.complex128)
        else:
            c, s = x / r, y / r
            g = np.array([[np.conj(c), np.conj(s)], [-s, c]])
        b[j : j + 2, :] = g @ b[j : j + 2, :]
        rots.append(g)
    for j, g in enumerate(rots):
        b[:, j : j + 2] = b[:, j : j + 2] @ g.conj().T
    b += mu * np.eye(k)


def eigvals_general(m, max_iter: int = 200) -> np.ndarray:
    """All eigenvalues of a general complex matrix via shifted Hessenberg QR.

    Wilkinson shifts with deflation on negligible subdiagonals; an
    exceptional shift is used every tenth iteration on a stalled block.
    """
    h = _hessenberg(as_cmatrix(m))
    n = h.shape[0]
    found: list[complex] = []
    hi = n - 1
    stall = 0
    total = 0
    while hi >= 0:
        if hi == 0:
            found.append(complex(h[0, 0]))
            break
        lo = hi
        while lo > 0:
            sub = abs(h[lo, lo - 1])
            if sub <= _EPS * (abs(h[lo - 1, lo - 1]) + abs(h[lo, lo])) or sub < 1e-300:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            found.append(complex(h[hi, hi]))
            hi -= 1
            stall = 0
            continue
        total += 1
        stall += 1
        if total > max_iter:
            raise ConvergenceError(f"QR iteration exceeded {max_iter} steps")
        a, b, c, d = h[hi - 1, hi - 1], h[hi - 1, hi], h[hi, hi - 1], h[hi, hi]
        if stall % 10 == 0:
            mu = d + abs(c)
        else:
            half_tr = 0.5 * (a + d)
            disc = np.sqrt(half_tr * half_tr - (a * d - b * c))
            mu1, mu2 = half_tr + disc, half_tr - disc
            mu = mu1 if abs(mu1 - d) <= abs(mu2 - d) else mu2
        block = h[lo : hi + 1, lo : hi + 1]
        _qr_step(block, mu)
        h[lo : hi + 1, lo : hi + 1] = block
    return np.array(found, dtype=np.complex128)


def eigvals_general4(m) -> np.ndarray:
    """The four eigenvalues of a 4x4 complex matrix (ordering unspecified)."""
    a = as_cmatrix(m)
    if a.shape != (4, 4):
        raise ValueError(f"eigvals_general4 needs a 4x4 matrix, got {a.shape}")
    return eigvals_general(a)


def sqrt_psd(m, clip: float = PSD_CLIP) -> np.ndarray:
    """Principal square root of a Hermitian positive semidefinite matrix.

    Eigenvalues in ``[-clip, 0)`` are treated as round-off and set to zero.

    Raises:
        NotPSDError: if an eigenvalue is below ``-clip``.
    """
    spec = eig_hermitian(m)
    lam = spec.eigenvalues
    if lam[0] < -clip:
        raise NotPSDError(f"matrix has eigenvalue {lam[0]:.3e} < -{clip:.0e}")
    root = np.sqrt(np.clip(lam, 0.0, None))
    v = spec.eigenvectors
    return (v * root) @ v.conj().T


def singular_values(m) -> np.ndarray:
    """Descending singular values, read off the Hermitian dilation.

    The eigenvalues of ``[[0, M], [M^H, 0]]`` are ``+-sigma_i``; taking them
    from a Jacobi eigensolve keeps small singular values accurate to the
    absolute rounding level instead of the square root of it.
    """
    a = as_cmatrix(m)
    n = a.shape[0]
    dil = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    dil[:n, n:] = a
    dil[n:, :n] = a.conj().T
    vals = eig_hermitian(dil, vectors=False).eigenvalues
    return np.clip(vals[::-1][:n], 0.0, None)


_PADE6 = tuple(
    math.factorial(12 - k) * math.factorial(6) / (math.factorial(12) * math.factorial(k) * math.factorial(6 - k))
    for k in range(7)
)


def expm(m) -> np.ndarray:
    """Matrix exponential by scaling and squaring with a [6/6] Pade approximant."""
    a = as_cmatrix(m)
    n = a.shape[0]
    norm1 = float(np.max(np.sum(np.abs(a), axis=0))) if n else 0.0
    s = max(0, int(math.ceil(math.log2(norm1 / 0.5)))) if norm1 > 0.5 else 0
    a = a / (2.0**s)
    eye = np.eye(n, dtype=np.complex128)
    a2 = a @ a
    a4 = a2 @ a2
    a6 = a4 @ a2
    c = _PADE6
    u = a @ (c[1] * eye + c[3] * a2 + c[5] * a4)
    v = c[0] * eye + c[2] * a2 + c[4] * a4 + c[6] * a6
    r = np.linalg.solve(v - u, v + u)
    for _ in range(s):
        r = r @ r
    return r
