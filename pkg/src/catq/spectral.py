"""Eigendecomposition of dense complex matrices.

The rest of the package needs ``H = P diag(lam) P^-1`` with a reproducible
choice of ``P``: columns have unit Euclidean norm and their largest-magnitude
component is made real and positive.  Inputs whose eigenvector matrix is too
ill-conditioned are rejected as defective.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DefectiveMatrixError, DimensionMismatchError, NonFiniteError

DEFAULT_COND_LIMIT = 1e8
SPECTRAL_EPS = 1e-10
DEGENERACY_TOL = 1e-9


def as_cmatrix(h, name="H") -> np.ndarray:
    """Return ``h`` as a square complex128 array, rejecting non-finite entries."""
    a = np.asarray(h, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise DimensionMismatchError(f"{name} must be a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFiniteError(f"{name} has non-finite entries")
    return a


def as_cvector(v, dim: int, name="vector") -> np.ndarray:
    a = np.asarray(v, dtype=np.complex128)
    if a.ndim != 1 or a.shape[0] != dim:
        raise DimensionMismatchError(f"{name} must have shape ({dim},), got {a.shape}")
    return a


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues and diagonalizer of a matrix.

    ``diagonalizer[:, i]`` is the eigenvector for ``eigenvalues[i]``.
    """

    eigenvalues: np.ndarray
    diagonalizer: np.ndarray
    inverse_diagonalizer: np.ndarray
    cond_p: float

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        p = self.diagonalizer
        return (p * self.eigenvalues) @ self.inverse_diagonalizer


def _fix_phases(p: np.ndarray) -> np.ndarray:
    p = p / np.linalg.norm(p, axis=0)
    k = np.argmax(np.abs(p), axis=0)
    lead = p[k, np.arange(p.shape[1])]
    return p * (np.abs(lead) / lead)


def _clusters(lam: np.ndarray, tol: float) -> list[list[int]]:
    """Single-linkage groups of eigenvalues closer than ``tol``."""
    n = lam.shape[0]
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(lam[i] - lam[j]) <= tol:
                parent[find(j)] = find(i)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [g for g in groups.values() if len(g) > 1]


def _refined_inverse(p: np.ndarray) -> np.ndarray:
    x = np.linalg.inv(p)
    # one Newton-Schulz step
    eye = np.eye(p.shape[0])
    return x + x @ (eye - p @ x)


def _residual(h, lam, p) -> float:
    hn = np.linalg.norm(h)
    if hn == 0.0:
        return 0.0
    return float(np.linalg.norm(h @ p - p * lam) / hn)


def eigendecompose(h, cond_limit: float = DEFAULT_COND_LIMIT) -> Spectrum:
    """Diagonalize a general complex square matrix.

    Eigenvalues are sorted by descending imaginary part, ties broken by
    descending real part.  Eigenvectors belonging to a numerically degenerate
    eigenvalue (``|lam_i - lam_j| <= 1e-9 ||H||_F``) are orthonormalized
    within their eigenspace.

    Parameters
    ----------
    h : array_like
        Square complex matrix.
    cond_limit : float
        Largest accepted 2-norm condition number of the unit-column
        eigenvector matrix.  Anything above is reported as defective.

    Raises
    ------
    DefectiveMatrixError
        ``cond(P) > cond_limit``.
    NonFiniteError
        ``h`` contains NaN or inf.
    """
    if cond_limit < 1:
        raise ValueError("cond_limit must be >= 1")
    h = as_cmatrix(h)
    n = h.shape[0]
    hnorm = np.linalg.norm(h)

    lam, p = scipy.linalg.eig(h)
    order = np.lexsort((-lam.real, -lam.imag))
    lam = lam[order]
    p = _fix_phases(p[:, order])

    cond = np.linalg.cond(p)
    if not np.isfinite(cond) or cond > cond_limit:
        raise DefectiveMatrixError(f"eigenvector matrix has cond {cond:.3g} > {cond_limit:.3g}; treating H as non-diagonalizable")

    for group in _clusters(lam, DEGENERACY_TOL * hnorm):
        trial = p.copy()
        basis, _ = np.linalg.qr(p[:, group])
        trial[:, group] = basis
        trial = _fix_phases(trial)
        trial_lam = lam.copy()
        trial_lam[group] = np.mean(lam[group])
        if _residual(h, trial_lam, trial) <= SPECTRAL_EPS:
            p, lam = trial, trial_lam

    p_inv = _refined_inverse(p)
    if _residual(h, lam, p) > SPECTRAL_EPS:
        # Rayleigh-type refinement with the left eigenvectors
        lam = np.einsum("ij,jk,ki->i", p_inv, h, p)
        if _residual(h, lam, p) > SPECTRAL_EPS:
            raise DefectiveMatrixError("eigendecomposition residual above tolerance")

    return Spectrum(
        eigenvalues=lam,
        diagonalizer=p,
        inverse_diagonalizer=p_inv,
        cond_p=float(max(np.linalg.cond(p), 1.0)) if n > 1 else 1.0,
    )


def spectral_residual(h, s: Spectrum) -> float:
    """``||H P - P diag(lam)||_F / ||H||_F``."""
    h = as_cmatrix(h)
    if h.shape[0] != s.dim or s.diagonalizer.shape != h.shape:
        raise DimensionMismatchError(f"H is {h.shape[0]}x{h.shape[0]} but spectrum has dimension {s.dim}")
    return _residual(h, s.eigenvalues, s.diagonalizer)
