"""Two-sided time evolution in the eigenbasis.

``|A(t)>`` evolves forward from ``t_a`` under ``H``; ``|B(t)>`` evolves backward
from ``t_b`` under the Q-adjoint of ``H``.  Both are exact sums of scalar
exponentials over eigenmodes, so no dense matrix exponential is needed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DefectiveMatrixError, DimensionMismatchError, TimeOrderError, TimeOutOfRangeError
from .qmetric import QMetric
from .spectral import Spectrum, as_cmatrix, as_cvector, eigendecompose

# tolerance on the closed interval [t_a, t_b]
_TIME_SLACK = 1e-12


@dataclass(frozen=True)
class BoundaryData:
    """Eigen-coefficients ``a_i(t_a)`` of the initial state and ``b_i(t_b)`` of the final state."""

    a_coeffs: np.ndarray
    b_coeffs: np.ndarray
    t_a: float
    t_b: float
    hbar: float = 1.0

    def __post_init__(self):
        a = np.asarray(self.a_coeffs, dtype=np.complex128)
        b = np.asarray(self.b_coeffs, dtype=np.complex128)
        if a.ndim != 1 or a.shape != b.shape:
            raise DimensionMismatchError(f"coefficient vectors must be 1-D with equal length, got {a.shape} and {b.shape}")
        if not self.t_b >= self.t_a:
            raise TimeOrderError(f"t_b={self.t_b} precedes t_a={self.t_a}")
        if not self.hbar > 0:
            raise ValueError("hbar must be positive")
        object.__setattr__(self, "a_coeffs", a)
        object.__setattr__(self, "b_coeffs", b)

    @property
    def duration(self) -> float:
        return self.t_b - self.t_a


def _check_time(bd: BoundaryData, t: float):
    slack = _TIME_SLACK * max(1.0, abs(bd.t_a), abs(bd.t_b))
    if t < bd.t_a - slack or t > bd.t_b + slack:
        raise TimeOutOfRangeError(f"t={t} outside [{bd.t_a}, {bd.t_b}]")


def _check_bd(s: Spectrum, bd: BoundaryData):
    if bd.a_coeffs.shape[0] != s.dim:
        raise DimensionMismatchError(f"boundary data has {bd.a_coeffs.shape[0]} modes, spectrum has {s.dim}")


def expand(s: Spectrum, m: QMetric, v) -> np.ndarray:
    """Eigen-coefficients ``c_i = <lambda_i|_Q v>``, i.e. ``P^-1 v``."""
    if m.source_dim != s.dim:
        raise DimensionMismatchError("metric and spectrum dimensions differ")
    v = as_cvector(v, s.dim, "v")
    return s.inverse_diagonalizer @ v


def evolve_a(s: Spectrum, bd: BoundaryData, t: float) -> np.ndarray:
    _check_bd(s, bd)
    _check_time(bd, t)
    phase = np.exp(-1j * s.eigenvalues * (t - bd.t_a) / bd.hbar)
    return s.diagonalizer @ (bd.a_coeffs * phase)


def evolve_b(s: Spectrum, m: QMetric, bd: BoundaryData, t: float) -> np.ndarray:
    """Final state at ``t``; mode ``i`` carries ``exp(-i conj(lambda_i) (t - t_b) / hbar)``."""
    if m.source_dim != s.dim:
        raise DimensionMismatchError("metric and spectrum dimensions differ")
    _check_bd(s, bd)
    _check_time(bd, t)
    phase = np.exp(-1j * s.eigenvalues.conj() * (t - bd.t_b) / bd.hbar)
    return s.diagonalizer @ (bd.b_coeffs * phase)


class QhPropagator:
    """Cached eigendecomposition of a (Q-Hermitian) generator for repeated evolution.

    Hermitian generators go through ``eigh`` so the propagator is unitary to
    rounding.  Anything else is diagonalized with :func:`eigendecompose`; if
    that reports the generator as defective the propagator falls back to
    ``scipy.linalg.expm``.
    """

    def __init__(self, h_qh, hbar: float = 1.0):
        if not hbar > 0:
            raise ValueError("hbar must be positive")
        self.h = as_cmatrix(h_qh, "h_qh")
        self.hbar = float(hbar)
        self.dim = self.h.shape[0]
        scale = max(np.linalg.norm(self.h), 1e-300)
        self._dense = False
        if np.linalg.norm(self.h - self.h.conj().T) <= 1e-14 * scale:
            w, v = np.linalg.eigh(0.5 * (self.h + self.h.conj().T))
            self._w, self._v, self._v_inv = w.astype(np.complex128), v, v.conj().T
        else:
            try:
                spec = eigendecompose(self.h)
                self._w, self._v, self._v_inv = spec.eigenvalues, spec.diagonalizer, spec.inverse_diagonalizer
            except DefectiveMatrixError:
                self._dense = True

    def modes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Frequencies, eigenvectors and their inverse; fails for defective generators."""
        if self._dense:
            raise DefectiveMatrixError("generator is not diagonalizable")
        return self._w, self._v, self._v_inv

    def matrix(self, dt: float) -> np.ndarray:
        """``exp(-i h dt / hbar)``."""
        if self._dense:
            return scipy.linalg.expm(-1j * self.h * dt / self.hbar)
        return (self._v * np.exp(-1j * self._w * dt / self.hbar)) @ self._v_inv

    def evolve(self, v, dt: float) -> np.ndarray:
        v = as_cvector(v, self.dim, "v")
        if self._dense:
            return self.matrix(dt) @ v
        return self._v @ (np.exp(-1j * self._w * dt / self.hbar) * (self._v_inv @ v))

    def heisenberg(self, o, dt: float) -> np.ndarray:
        o = as_cmatrix(o, "O")
        if o.shape[0] != self.dim:
            raise DimensionMismatchError("operator and generator dimensions differ")
        return self.matrix(-dt) @ o @ self.matrix(dt)


def evolve_qh(h_qh, v, dt: float, hbar: float = 1.0) -> np.ndarray:
    """``exp(-i H_Qh dt / hbar) v``."""
    h_qh = as_cmatrix(h_qh, "h_qh")
    v = as_cvector(v, h_qh.shape[0], "v")
    if dt == 0:
        return v.copy()
    return QhPropagator(h_qh, hbar).evolve(v, dt)


def heisenberg_op(h_qh, o, dt: float, hbar: float = 1.0) -> np.ndarray:
    """``exp(i H_Qh dt / hbar) O exp(-i H_Qh dt / hbar)``."""
    h_qh = as_cmatrix(h_qh, "h_qh")
    o = as_cmatrix(o, "O")
    if o.shape != h_qh.shape:
        raise DimensionMismatchError(f"O is {o.shape}, H_Qh is {h_qh.shape}")
    if dt == 0:
        return o.copy()
    return QhPropagator(h_qh, hbar).heisenberg(o, dt)
