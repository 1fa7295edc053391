"""Probability density, current and the continuity equation on a uniform grid.

Works in the ordinary grid basis, i.e. for reduced dynamics generated by a
Hermitian grid Hamiltonian whose kinetic coefficient is the real ``mass``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import GridMismatchError, NotNormalizedError

NORM_TOL = 1e-6
EDGE_TOL = 1e-6
_IMAG_TOL = 1e-12


@dataclass(frozen=True)
class GridWavefunction:
    samples: np.ndarray
    q_min: float
    dq: float
    t: float = 0.0
    mass: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        psi = np.ascontiguousarray(self.samples, dtype=np.complex128)
        if psi.ndim != 1 or psi.shape[0] < 3:
            raise ValueError("samples must be 1-D with at least 3 points")
        if not self.dq > 0 or not self.mass > 0 or not self.hbar > 0:
            raise ValueError("dq, mass and hbar must be positive")
        object.__setattr__(self, "samples", psi)

    @property
    def grid(self) -> np.ndarray:
        return self.q_min + self.dq * np.arange(self.samples.shape[0])

    def total_probability(self) -> float:
        return float(np.sum(np.abs(self.samples) ** 2) * self.dq)

    def normalized(self) -> GridWavefunction:
        psi = self.samples / np.sqrt(self.total_probability())
        return GridWavefunction(psi, self.q_min, self.dq, self.t, self.mass, self.hbar)

    def validate(self):
        total = self.total_probability()
        if abs(total - 1.0) > NORM_TOL:
            raise NotNormalizedError(f"sum |psi|^2 dq = {total!r}")
        a = np.abs(self.samples)
        if max(a[0], a[-1]) > EDGE_TOL * a.max():
            raise NotNormalizedError("wavefunction has not decayed at the grid edges")


def density(psi: GridWavefunction) -> np.ndarray:
    psi.validate()
    return np.abs(psi.samples) ** 2


def current(psi: GridWavefunction) -> np.ndarray:
    """``j = (i hbar / 2m)(psi*' psi - psi* psi')`` with second-order differences."""
    psi.validate()
    s = psi.samples
    d = np.gradient(s, psi.dq, edge_order=2)
    full = (1j * psi.hbar / (2.0 * psi.mass)) * (d.conj() * s - s.conj() * d)
    if np.max(np.abs(full.imag)) > _IMAG_TOL * max(np.max(np.abs(full.real)), 1.0):
        raise ArithmeticError("probability current has a non-zero imaginary part")
    return _backend.probability_current(s, psi.dq, psi.hbar, psi.mass)


def continuity_residual(psi_before: GridWavefunction, psi_after: GridWavefunction) -> float:
    """``max |d rho/dt + d j/dq|`` over interior points.

    The time derivative is the forward difference between the two snapshots;
    the current is taken from their re-normalized average.
    """
    a, b = psi_before, psi_after
    if (
        a.samples.shape != b.samples.shape
        or not np.isclose(a.q_min, b.q_min, rtol=0, atol=1e-12 * a.dq * a.samples.shape[0])
        or not np.isclose(a.dq, b.dq, rtol=1e-12, atol=0)
        or a.mass != b.mass
        or a.hbar != b.hbar
    ):
        raise GridMismatchError("wavefunctions live on different grids or carry different constants")
    dt = b.t - a.t
    if not dt > 0:
        raise ValueError("psi_after must be later than psi_before")
    rho_a = density(a)
    rho_b = density(b)
    mid = GridWavefunction(0.5 * (a.samples + b.samples), a.q_min, a.dq, 0.5 * (a.t + b.t), a.mass, a.hbar).normalized()
    j = current(mid)
    dj = (j[2:] - j[:-2]) / (2.0 * a.dq)
    return float(np.max(np.abs((rho_b - rho_a)[1:-1] / dt + dj)))


def coherent_state(grid: np.ndarray, q0: float, p0: float, mass: float = 1.0, omega: float = 1.0, hbar: float = 1.0) -> np.ndarray:
    """Grid samples of the displaced oscillator ground state, normalized on the grid."""
    width2 = hbar / (mass * omega)
    psi = np.exp(-((grid - q0) ** 2) / (2.0 * width2) + 1j * p0 * grid / hbar)
    dq = grid[1] - grid[0]
    return psi / np.sqrt(np.sum(np.abs(psi) ** 2) * dq)
