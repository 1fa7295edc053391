"""Hamiltonians used by the tests, the CLI and the examples.

* seeded random non-normal matrices with a pinned upper bound on Im(lambda);
* the 2x2 triangular matrix with a hand-computable metric;
* the harmonic oscillator with complex mass and frequency on a uniform grid.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import GridExtentWarning, GridTooCoarseError, UnboundedSpectrumWarning
from .qmetric import QMetric, build_q, q_adjoint
from .spectral import Spectrum


@dataclass(frozen=True)
class RandomSpec:
    dim: int
    seed: int
    im_upper: float = 0.5
    im_spread: float = 1.0
    cond_target: float = 10.0
    n_pinned: int = 1

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError("dim must be >= 2")
        if not 1.0 <= self.cond_target <= 1e4:
            raise ValueError("cond_target must lie in [1, 1e4]")
        if not self.im_spread > 0:
            raise ValueError("im_spread must be positive")
        if not 1 <= self.n_pinned <= self.dim:
            raise ValueError("n_pinned must lie in [1, dim]")


def _haar_unitary(rng, n):
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_nonnormal(spec: RandomSpec) -> np.ndarray:
    """``P diag(lambda) P^-1`` with seeded eigenvalues and ``cond(P) = cond_target``.

    The first ``n_pinned`` eigenvalues have imaginary part exactly ``im_upper``;
    the others are drawn uniformly from ``(im_upper - im_spread, im_upper)``.
    ``P`` has Haar-random singular vectors and log-spaced singular values.
    """
    rng = np.random.default_rng(spec.seed)
    n = spec.dim
    re = rng.standard_normal(n)
    im = spec.im_upper - spec.im_spread * rng.uniform(0.0, 1.0, n)
    im[: spec.n_pinned] = spec.im_upper
    lam = re + 1j * im
    u = _haar_unitary(rng, n)
    v = _haar_unitary(rng, n)
    sv = np.logspace(0.0, -math.log10(spec.cond_target), n)
    p = (u * sv) @ v.conj().T
    return (p * lam) @ np.linalg.inv(p)


def triangular_demo() -> tuple[np.ndarray, np.ndarray]:
    """``H = [[1, 1], [0, 2]]`` and its metric ``[[1, -1], [-1, 3]]``."""
    h = np.array([[1.0, 1.0], [0.0, 2.0]], dtype=np.complex128)
    q = np.array([[1.0, -1.0], [-1.0, 3.0]], dtype=np.complex128)
    return h, q


@dataclass(frozen=True)
class OscillatorSpec:
    """``p^2 / 2m + m omega^2 q^2 / 2`` on ``n_points`` equally spaced points of ``[grid_min, grid_max]``."""

    mass: complex = 1.0
    omega: complex = 1.0
    hbar: float = 1.0
    grid_max: float = 8.0
    n_points: int = 256
    grid_min: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "mass", complex(self.mass))
        object.__setattr__(self, "omega", complex(self.omega))
        if self.grid_min is None:
            object.__setattr__(self, "grid_min", -float(self.grid_max))
        if not math.isclose(self.grid_min, -self.grid_max, rel_tol=0, abs_tol=1e-12 * abs(self.grid_max)):
            raise ValueError("grid must be symmetric about 0")
        if not self.grid_max > 0 or not self.hbar > 0:
            raise ValueError("grid_max and hbar must be positive")
        if self.mass == 0 or self.omega == 0:
            raise ValueError("mass and omega must be non-zero")

    @property
    def theta(self) -> float:
        """``arg(m omega)`` in ``(-pi, pi]``."""
        return cmath.phase(self.mass * self.omega)

    @property
    def m_eff(self) -> complex:
        return self.mass * cmath.exp(-1j * self.theta)

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(self.grid_min, self.grid_max, self.n_points)

    @property
    def dq(self) -> float:
        return (self.grid_max - self.grid_min) / (self.n_points - 1)

    def exact_eigenvalues(self, count: int) -> np.ndarray:
        """Continuum spectrum ``hbar w (n + 1/2)`` with ``w = sqrt(omega^2)`` on the ``Re w > 0`` branch."""
        w = cmath.sqrt(self.omega**2)
        if w.real < 0:
            w = -w
        return self.hbar * w * (np.arange(count) + 0.5)


def position_operator(spec: OscillatorSpec) -> np.ndarray:
    return np.diag(spec.grid).astype(np.complex128)


def momentum_operator(spec: OscillatorSpec) -> np.ndarray:
    """``-i hbar d/dq`` by central differences (Hermitian, zero outside the grid)."""
    n = spec.n_points
    d1 = (np.eye(n, k=1) - np.eye(n, k=-1)) / (2.0 * spec.dq)
    return -1j * spec.hbar * d1


def oscillator_hamiltonian(spec: OscillatorSpec) -> np.ndarray:
    """Dense grid Hamiltonian with a three-point Laplacian and Dirichlet ends.

    Warns with :class:`UnboundedSpectrumWarning` when ``Im omega > 0``: the
    continuum spectrum then has imaginary parts growing without bound, which
    the finite grid hides.
    """
    if spec.n_points < 16:
        raise GridTooCoarseError(f"need at least 16 grid points, got {spec.n_points}")
    length = math.sqrt(spec.hbar / abs(spec.mass * spec.omega))
    if spec.grid_max < 6.0 * length:
        warnings.warn(
            f"grid_max={spec.grid_max} < 6 sqrt(hbar/|m omega|)={6 * length:.3g}; low eigenfunctions may not decay at the edges",
            GridExtentWarning,
            stacklevel=2,
        )
    if spec.omega.imag > 0:
        warnings.warn(
            "Im(omega) > 0: Im(lambda_n) grows with n, so the spectrum is not bounded above; unsuitable for maximization runs",
            UnboundedSpectrumWarning,
            stacklevel=2,
        )
    n = spec.n_points
    lap = (np.eye(n, k=1) + np.eye(n, k=-1) - 2.0 * np.eye(n)) / spec.dq**2
    kinetic = -(spec.hbar**2) / (2.0 * spec.mass) * lap
    potential = 0.5 * spec.mass * spec.omega**2 * spec.grid**2
    return kinetic + np.diag(potential)


def bilinear_spectrum(s: Spectrum) -> Spectrum:
    """Rescale eigenvectors so that ``sum_k P_ki^2 = 1`` (no complex conjugation).

    For a complex-symmetric ``H`` such as the grid oscillator this is the
    analytic continuation of the real orthonormal eigenfunctions, and the
    metric built from it makes the ladder operators Q-adjoint to each other.
    The sign is chosen so the largest-magnitude component has positive real part.
    """
    p = s.diagonalizer
    c = np.sqrt(np.sum(p * p, axis=0))
    p = p / c
    k = np.argmax(np.abs(p), axis=0)
    sign = np.where(p[k, np.arange(p.shape[1])].real < 0, -1.0, 1.0)
    p = p * sign
    p_inv = (s.inverse_diagonalizer.T * (c * sign)).T
    return Spectrum(
        eigenvalues=s.eigenvalues,
        diagonalizer=p,
        inverse_diagonalizer=p_inv,
        cond_p=float(np.linalg.cond(p)),
    )


def oscillator_metric(s: Spectrum) -> QMetric:
    """Metric from bilinear-normalized eigenvectors (see :func:`bilinear_spectrum`)."""
    return build_q(bilinear_spectrum(s))


class OscillatorRelations(NamedTuple):
    residual_q: float
    residual_p: float
    residual_h: float
    residual_q_adjoint: float
    residual_p_adjoint: float
    cos_half_theta: float


def oscillator_qq_relations(spec: OscillatorSpec, s: Spectrum, m: QMetric, n_check: int = 8) -> OscillatorRelations:
    """Compare the Q-Hermitian parts of ``q`` and ``p`` with their phase-rotated forms.

    With ``q_Q = (q + q^{dagger Q}) / 2`` and ``p_Q = (p + p^{dagger Q}) / 2`` returns,
    as relative residuals on the span of the ``n_check`` eigenstates with the
    lowest ``Re lambda``:

    * ``residual_q``: ``q_Q - e^{i theta/2} q``
    * ``residual_p``: ``p_Q - e^{-i theta/2} p``
    * ``residual_h``: ``H - (p_Q^2 / 2 m_eff + m_eff omega^2 q_Q^2 / 2)``
    * ``residual_q_adjoint``: ``q^{dagger Q} - e^{i theta} q``
    * ``residual_p_adjoint``: ``p^{dagger Q} - e^{-i theta} p``

    The last two are what makes ``e^{+-i theta/2}`` times ``q`` / ``p``
    Q-Hermitian.  Given them, ``q_Q = cos(theta/2) e^{i theta/2} q``, so
    ``residual_q`` and ``residual_p`` cannot drop below ``1 - cos(theta/2)``
    and ``residual_h`` not below ``1 - cos(theta/2)^2``; ``cos_half_theta``
    is returned so callers can see that floor.
    """
    n = spec.n_points
    if s.dim != n or m.source_dim != n:
        raise ValueError("spectrum and metric must come from the oscillator grid")
    if not 1 <= n_check <= n // 4:
        raise ValueError(f"n_check must lie in [1, {n // 4}]")
    theta = spec.theta
    q_op = position_operator(spec)
    p_op = momentum_operator(spec)
    q_adj = q_adjoint(m, q_op)
    p_adj = q_adjoint(m, p_op)
    q_q = 0.5 * (q_op + q_adj)
    p_q = 0.5 * (p_op + p_adj)
    h = s.reconstruct()
    m_eff = spec.m_eff
    h_eff = p_q @ p_q / (2.0 * m_eff) + 0.5 * m_eff * spec.omega**2 * (q_q @ q_q)

    low = s.diagonalizer[:, np.argsort(s.eigenvalues.real, kind="stable")[:n_check]]

    def rel(diff, ref):
        return float(np.linalg.norm(diff @ low) / np.linalg.norm(ref @ low))

    ph = cmath.exp(0.5j * theta)
    return OscillatorRelations(
        residual_q=rel(q_q - ph * q_op, q_op),
        residual_p=rel(p_q - p_op / ph, p_op),
        residual_h=rel(h - h_eff, h),
        residual_q_adjoint=rel(q_adj - ph**2 * q_op, q_op),
        residual_p_adjoint=rel(p_adj - p_op / ph**2, p_op),
        cos_half_theta=math.cos(0.5 * theta),
    )
