"""Dense complex matrix kernel.

Hermitian eigendecomposition, principal square roots, gated inverses and
the Frobenius norm that every residual in the package is measured in.
All routines are pure functions of small (desk-scale) matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IllConditioned, NotHermitian, NotPositiveDefinite

EPS_HERM = 1e-10
EPS_POS = 1e-10
COND_MAX = 1e8


def as_matrix(a) -> np.ndarray:
    """Coerce to a square complex ndarray, rejecting non-finite entries."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise ValueError("matrix entries must be finite")
    return m


def fro_norm(a) -> float:
    return float(np.linalg.norm(np.asarray(a, dtype=complex)))


def hermitize(a) -> np.ndarray:
    """(A + A†)/2; exactly Hermitian by construction."""
    m = as_matrix(a)
    return 0.5 * (m + m.conj().T)


def herm_defect(a) -> float:
    m = np.asarray(a, dtype=complex)
    return fro_norm(m - m.conj().T)


@dataclass(frozen=True)
class HermitianEigen:
    eigenvalues: np.ndarray   # real, ascending
    eigenvectors: np.ndarray  # orthonormal columns


def eig_hermitian(a, eps_herm: float = EPS_HERM) -> HermitianEigen:
    """Spectral decomposition, gated on a relative Hermiticity check.

    The decomposition itself runs on hermitize(a) so that floating-point
    drift below the gate is harmless.
    """
    m = as_matrix(a)
    defect = herm_defect(m)
    if defect > eps_herm * fro_norm(m):
        raise NotHermitian(defect)
    w, v = np.linalg.eigh(hermitize(m))
    return HermitianEigen(w, v)


def principal_sqrt(a, eps_herm: float = EPS_HERM, eps_pos: float = EPS_POS) -> np.ndarray:
    """Unique Hermitian positive-definite S with S @ S == a.

    Positivity gate is relative: lambda_min must exceed eps_pos * lambda_max.
    """
    eig = eig_hermitian(a, eps_herm)
    w, v = eig.eigenvalues, eig.eigenvectors
    lo, hi = float(w[0]), float(w[-1])
    if hi <= 0.0 or lo <= eps_pos * hi:
        raise NotPositiveDefinite(lo, hi)
    return (v * np.sqrt(w)) @ v.conj().T


def cond_2norm(a) -> float:
    s = np.linalg.svd(as_matrix(a), compute_uv=False)
    if s[-1] == 0.0:
        return float("inf")
    return float(s[0] / s[-1])


def inverse(a, cond_max: float = COND_MAX) -> np.ndarray:
    """Matrix inverse, refused above a condition-number ceiling."""
    m = as_matrix(a)
    c = cond_2norm(m)
    if not c <= cond_max:
        raise IllConditioned(c)
    return np.linalg.inv(m)


# --- [re, im] pair encoding used by scenario files and fixtures ---

def matrix_from_pairs(obj) -> np.ndarray:
    arr = np.asarray(obj, dtype=float)
    if arr.ndim != 3 or arr.shape[0] != arr.shape[1] or arr.shape[2] != 2:
        raise ValueError(f"expected an n x n x 2 nest of [re, im] pairs, got shape {arr.shape}")
    return as_matrix(arr[..., 0] + 1j * arr[..., 1])


def matrix_to_pairs(a) -> list:
    m = as_matrix(a)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def vector_from_pairs(obj) -> np.ndarray:
    arr = np.asarray(obj, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"expected an n x 2 list of [re, im] pairs, got shape {arr.shape}")
    v = arr[:, 0] + 1j * arr[:, 1]
    if not np.isfinite(v).all():
        raise ValueError("vector entries must be finite")
    return v


def vector_to_pairs(v) -> list:
    arr = np.asarray(v, dtype=complex)
    return [[float(z.real), float(z.imag)] for z in arr]
