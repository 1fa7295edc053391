"""The metric ``Q = (P^dagger)^-1 P^-1`` and everything defined through it.

Under ``<u|v>_Q = u^dagger Q v`` the eigenvectors of ``H`` are orthonormal, the
Q-adjoint of ``A`` is ``Q^-1 A^dagger Q``, and ``H`` is normal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, NumericallySingularError, ZeroVectorError
from .spectral import Spectrum, as_cmatrix, as_cvector


@dataclass(frozen=True)
class QMetric:
    q: np.ndarray
    q_inv: np.ndarray
    source_dim: int

    def _check_matrix(self, a, name="operator") -> np.ndarray:
        a = as_cmatrix(a, name)
        if a.shape[0] != self.source_dim:
            raise DimensionMismatchError(f"{name} is {a.shape[0]}x{a.shape[0]}, metric has dimension {self.source_dim}")
        return a


def build_q(s: Spectrum) -> QMetric:
    """Metric making the eigenvectors of ``s`` orthonormal.

    ``q_inv`` is formed directly as ``P P^dagger`` rather than by inverting ``q``.
    """
    p_inv = s.inverse_diagonalizer
    p = s.diagonalizer
    q = p_inv.conj().T @ p_inv
    q = 0.5 * (q + q.conj().T)
    q_inv = p @ p.conj().T
    q_inv = 0.5 * (q_inv + q_inv.conj().T)
    if not np.all(np.isfinite(q)):
        raise NumericallySingularError("metric has non-finite entries")
    if np.linalg.eigvalsh(q).min() <= 0.0:
        raise NumericallySingularError("metric is not positive definite; diagonalizer too ill-conditioned")
    return QMetric(q=q, q_inv=q_inv, source_dim=s.dim)


def inner_q(m: QMetric, u, v) -> complex:
    """``u^dagger Q v`` (conjugate-linear in ``u``)."""
    u = as_cvector(u, m.source_dim, "u")
    v = as_cvector(v, m.source_dim, "v")
    return complex(np.vdot(u, m.q @ v))


def q_adjoint(m: QMetric, a) -> np.ndarray:
    a = m._check_matrix(a)
    return m.q_inv @ a.conj().T @ m.q


def decompose_h(m: QMetric, h) -> tuple[np.ndarray, np.ndarray]:
    """Split ``h`` into its Q-Hermitian and anti-Q-Hermitian parts."""
    h = m._check_matrix(h, "H")
    h_adj = q_adjoint(m, h)
    h_qh = 0.5 * (h + h_adj)
    return h_qh, h - h_qh


def q_normality_residual(m: QMetric, h) -> float:
    """``||[H, H^{dagger Q}]||_F / ||H||_F^2``; zero iff H is Q-normal."""
    h = m._check_matrix(h, "H")
    hn = np.linalg.norm(h)
    if hn == 0.0:
        return 0.0
    h_adj = q_adjoint(m, h)
    return float(np.linalg.norm(h @ h_adj - h_adj @ h) / hn**2)


def q_normalize(m: QMetric, v) -> np.ndarray:
    v = as_cvector(v, m.source_dim, "v")
    norm2 = inner_q(m, v, v).real
    if not norm2 > 0.0:
        raise ZeroVectorError("cannot Q-normalize the zero vector")
    return v / np.sqrt(norm2)


def random_q_hermitian(m: QMetric, seed: int) -> np.ndarray:
    """Seeded random operator ``Q^-1 M`` with ``M`` Hermitian, hence Q-Hermitian."""
    rng = np.random.default_rng(seed)
    n = m.source_dim
    x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    herm = 0.5 * (x + x.conj().T)
    return m.q_inv @ herm
