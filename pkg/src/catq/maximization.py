"""Boundary states maximizing the two-sided transition amplitude.

For Q-normalized ``|A(t_a)>`` and ``|B(t_b)>`` the amplitude
``|<B(t)|_Q A(t)>|`` is bounded by ``exp(B T / hbar)`` where ``B`` is the largest
imaginary part in the spectrum and ``T = t_b - t_a``.  The bound is reached
exactly when both states live on the modes with maximal imaginary part, have
equal magnitudes mode by mode, and share a common phase.

:func:`build_max_pair` constructs such a pair directly; :func:`oracle_maximize`
finds the maximum numerically without using the eigenbasis construction and
serves as an independent check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import _backend
from .dynamics import BoundaryData
from .errors import DegenerateWeightsError, DimensionMismatchError, EmptyInputError, TimeOrderError
from .qmetric import QMetric, inner_q
from .spectral import Spectrum


@dataclass(frozen=True)
class MaxSolution:
    dominant_set: tuple[int, ...]
    bound_b: float
    theta_c: float
    a_magnitudes: np.ndarray
    a_phases: np.ndarray
    b_magnitudes: np.ndarray
    b_phases: np.ndarray
    attained: float
    t_a: float
    t_b: float
    hbar: float

    @property
    def duration(self) -> float:
        return self.t_b - self.t_a

    def boundary_data(self, dim: int) -> BoundaryData:
        """Full-length coefficient vectors, zero outside the dominant set."""
        a = np.zeros(dim, dtype=np.complex128)
        b = np.zeros(dim, dtype=np.complex128)
        idx = list(self.dominant_set)
        a[idx] = self.a_magnitudes * np.exp(1j * self.a_phases)
        b[idx] = self.b_magnitudes * np.exp(1j * self.b_phases)
        return BoundaryData(a, b, self.t_a, self.t_b, self.hbar)


def dominant_set(eigenvalues, rel_tol: float = 1e-9) -> tuple[tuple[int, ...], float]:
    """Indices whose imaginary part ties the maximum, and that maximum.

    The tie tolerance is ``rel_tol`` times ``max(spread of Im lambda, max |lambda|)``
    (or times 1 if both vanish), so eigenvalues that are real up to rounding
    are grouped together.
    """
    lam = np.asarray(eigenvalues, dtype=np.complex128).ravel()
    if lam.size == 0:
        raise EmptyInputError("no eigenvalues")
    if rel_tol < 0:
        raise ValueError("rel_tol must be non-negative")
    im = lam.imag
    b = float(im.max())
    scale = max(float(im.max() - im.min()), float(np.abs(lam).max()))
    if scale == 0.0:
        scale = 1.0
    idx = tuple(int(i) for i in np.nonzero(im >= b - rel_tol * scale)[0])
    return idx, b


def build_max_pair(
    s: Spectrum,
    m: QMetric,
    t_a: float,
    t_b: float,
    hbar: float = 1.0,
    weights=None,
    theta_c: float = 0.0,
    a_phases=None,
    rel_tol: float = 1e-9,
) -> tuple[MaxSolution, np.ndarray, np.ndarray]:
    """Construct a Q-normalized pair ``(|A(t_a)>, |B(t_b)>)`` saturating the amplitude bound.

    ``weights`` and ``a_phases`` are indexed by the dominant set; magnitudes
    are ``sqrt(w_i / sum(w))`` (uniform by default).  The final-state phases
    are fixed by ``theta_a_i - theta_b_i - (T/hbar) Re lambda_i = theta_c``.
    """
    if not t_b > t_a:
        raise TimeOrderError(f"need t_b > t_a, got t_a={t_a}, t_b={t_b}")
    if m.source_dim != s.dim:
        raise DimensionMismatchError("metric and spectrum dimensions differ")
    idx, b = dominant_set(s.eigenvalues, rel_tol)
    k = len(idx)
    if weights is None:
        w = np.ones(k)
    else:
        w = np.asarray(weights, dtype=float).ravel()
        if w.shape != (k,):
            raise DimensionMismatchError(f"weights must have length {k} (size of dominant set)")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite and non-negative")
        if w.sum() == 0.0:
            raise DegenerateWeightsError("all weights are zero")
    if a_phases is None:
        th_a = np.zeros(k)
    else:
        th_a = np.asarray(a_phases, dtype=float).ravel()
        if th_a.shape != (k,):
            raise DimensionMismatchError(f"a_phases must have length {k}")

    mag = np.sqrt(w / w.sum())
    duration = t_b - t_a
    lam = s.eigenvalues[list(idx)]
    th_b = th_a - duration * lam.real / hbar - theta_c
    attained = float(np.sum(mag**2 * np.exp(duration * lam.imag / hbar)))

    sol = MaxSolution(
        dominant_set=idx,
        bound_b=b,
        theta_c=float(theta_c),
        a_magnitudes=mag,
        a_phases=th_a,
        b_magnitudes=mag.copy(),
        b_phases=th_b,
        attained=attained,
        t_a=float(t_a),
        t_b=float(t_b),
        hbar=float(hbar),
    )
    bd = sol.boundary_data(s.dim)
    a_state = s.diagonalizer @ bd.a_coeffs
    b_state = s.diagonalizer @ bd.b_coeffs
    return sol, a_state, b_state


def transition_amplitude(m: QMetric, b_state_t, a_state_t) -> complex:
    return inner_q(m, b_state_t, a_state_t)


@dataclass(frozen=True)
class OracleResult:
    best_value: float
    a_state: np.ndarray
    b_state: np.ndarray
    converged: bool
    values: np.ndarray
    iterations: np.ndarray


def oracle_maximize(
    s: Spectrum,
    m: QMetric,
    t_a: float,
    t_b: float,
    hbar: float = 1.0,
    restarts: int = 64,
    iters: int = 4000,
    seed: int = 0,
    h=None,
    step: float = 4.0,
    tol: float = 1e-13,
    patience: int = 20,
) -> OracleResult:
    """Numerically maximize ``|<B|_Q exp(-i H T / hbar) |A>|`` over Q-normalized pairs.

    The propagator is a dense matrix exponential of ``H`` (reconstructed from
    ``s`` unless ``h`` is given).  The metric is whitened with its Cholesky
    factor ``Q = L L^dagger`` so both constraint sets become Euclidean unit
    spheres, and seeded restarts run projected gradient ascent there.  The
    eigen-decomposition structure of the maximizer is never used.

    ``step`` is in units of ``1 / ||K||_F^2``, ``K`` being the whitened
    propagator.  Non-convergence is reported through ``converged``, not raised.
    """
    if not t_b > t_a:
        raise TimeOrderError(f"need t_b > t_a, got t_a={t_a}, t_b={t_b}")
    if restarts < 1:
        raise ValueError("restarts must be positive")
    n = s.dim
    if h is None:
        h = s.reconstruct()
    h = np.asarray(h, dtype=np.complex128)
    prop = scipy.linalg.expm(-1j * h * (t_b - t_a) / hbar)

    chol = np.linalg.cholesky(m.q)
    # K = L^dagger U L^{-dagger}
    k_mat = chol.conj().T @ scipy.linalg.solve_triangular(chol, prop.conj().T, lower=True).conj().T
    k_mat = np.ascontiguousarray(k_mat)
    fro2 = float(np.linalg.norm(k_mat) ** 2)

    rng = np.random.default_rng(seed)
    x = rng.standard_normal((restarts, n)) + 1j * rng.standard_normal((restarts, n))
    y = rng.standard_normal((restarts, n)) + 1j * rng.standard_normal((restarts, n))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    y /= np.linalg.norm(y, axis=1, keepdims=True)
    x = np.ascontiguousarray(x)
    y = np.ascontiguousarray(y)

    values, n_iter, converged = _backend.pga_ascent(k_mat, x, y, int(iters), step / fro2, tol, int(patience))
    best = int(np.argmax(values))

    # back to the original coordinates: a = L^{-dagger} x
    a_state = scipy.linalg.solve_triangular(chol.conj().T, x[best], lower=False)
    b_state = scipy.linalg.solve_triangular(chol.conj().T, y[best], lower=False)
    best_value = abs(inner_q(m, b_state, prop @ a_state))
    return OracleResult(
        best_value=float(best_value),
        a_state=a_state,
        b_state=b_state,
        converged=bool(converged[best]),
        values=np.asarray(values),
        iterations=np.asarray(n_iter),
    )
