"""Two-sided averages and the checks built on them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .dynamics import QhPropagator, evolve_a, evolve_b
from .errors import NotNormalizedError, VanishingOverlapError
from .maximization import build_max_pair
from .qmetric import QMetric, decompose_h, inner_q, random_q_hermitian
from .spectral import Spectrum

_OVERLAP_FLOOR = 1e-300
_NORM_TOL = 1e-8


@dataclass(frozen=True)
class AverageReport:
    value: complex
    imag_residual: float
    t: float
    kind: Literal["two_sided", "tilde"]


def _report(value: complex, t: float, kind) -> AverageReport:
    return AverageReport(value=value, imag_residual=abs(value.imag) / max(abs(value), 1.0), t=t, kind=kind)


def normalized_matrix_element(m: QMetric, b_t, o, a_t, t: float = math.nan) -> AverageReport:
    """``<B|_Q O |A> / <B|_Q A>``."""
    o = m._check_matrix(o, "O")
    denom = inner_q(m, b_t, a_t)
    if abs(denom) <= _OVERLAP_FLOOR:
        raise VanishingOverlapError("<B|_Q A> vanishes")
    num = inner_q(m, b_t, o @ np.asarray(a_t, dtype=np.complex128))
    return _report(num / denom, t, "two_sided")


def _check_normalized(m: QMetric, v):
    norm2 = inner_q(m, v, v).real
    if abs(norm2 - 1.0) > _NORM_TOL:
        raise NotNormalizedError(f"<v|_Q v> = {norm2!r}, expected 1")


def tilde_average(m: QMetric, tilde_a_t, o, t: float = math.nan) -> AverageReport:
    """``<A~|_Q O |A~>`` for a Q-normalized state."""
    o = m._check_matrix(o, "O")
    _check_normalized(m, tilde_a_t)
    v = np.asarray(tilde_a_t, dtype=np.complex128)
    return _report(inner_q(m, v, o @ v), t, "tilde")


def ehrenfest_rhs(m: QMetric, tilde_a_t, o, h_qh, hbar: float = 1.0) -> complex:
    """``(i/hbar) <[H_Qh, O]>`` in the Q-normalized state."""
    o = m._check_matrix(o, "O")
    h_qh = m._check_matrix(h_qh, "h_qh")
    _check_normalized(m, tilde_a_t)
    v = np.asarray(tilde_a_t, dtype=np.complex128)
    comm = h_qh @ o - o @ h_qh
    return 1j / hbar * inner_q(m, v, comm @ v)


def reality_sweep_series(
    s: Spectrum,
    m: QMetric,
    n_observables: int,
    n_times: int,
    seed: int,
    t_a: float = 0.0,
    t_b: float = 1.0,
    hbar: float = 1.0,
    q_hermitian: bool = True,
    weights=None,
    theta_c: float = 0.0,
    a_phases=None,
) -> tuple[np.ndarray, np.ndarray]:
    """Sampled times and, per time, the worst ``imag_residual`` over the observables.

    See :func:`reality_sweep` for the parameters.
    """
    sol, _, _ = build_max_pair(s, m, t_a, t_b, hbar, weights=weights, theta_c=theta_c, a_phases=a_phases)
    bd = sol.boundary_data(s.dim)
    rng = np.random.default_rng(seed)
    times = np.sort(rng.uniform(t_a, t_b, size=n_times))
    obs_seeds = rng.integers(0, 2**63 - 1, size=n_observables)
    n = s.dim
    ops = []
    for k in obs_seeds:
        if q_hermitian:
            ops.append(random_q_hermitian(m, int(k)))
        else:
            g = np.random.default_rng(int(k))
            ops.append(g.standard_normal((n, n)) + 1j * g.standard_normal((n, n)))
    worst = np.zeros(n_times)
    for i, t in enumerate(times):
        a_t = evolve_a(s, bd, float(t))
        b_t = evolve_b(s, m, bd, float(t))
        worst[i] = max(normalized_matrix_element(m, b_t, o, a_t, float(t)).imag_residual for o in ops)
    return times, worst


def reality_sweep(
    s: Spectrum,
    m: QMetric,
    n_observables: int,
    n_times: int,
    seed: int,
    t_a: float = 0.0,
    t_b: float = 1.0,
    hbar: float = 1.0,
    q_hermitian: bool = True,
    weights=None,
    theta_c: float = 0.0,
    a_phases=None,
) -> float:
    """Largest ``imag_residual`` of the two-sided average over random observables and times.

    The boundary states are the maximizing pair from :func:`build_max_pair`.
    Observables are seeded Q-Hermitian operators; with ``q_hermitian=False``
    they are generic complex matrices instead (a negative control, where the
    residual is expected to be of order one).
    """
    _, worst = reality_sweep_series(
        s, m, n_observables, n_times, seed, t_a, t_b, hbar, q_hermitian, weights, theta_c, a_phases
    )
    return float(worst.max()) if worst.size else 0.0


def tilde_state(m: QMetric, h, a_max_ta, t: float, t_a: float, hbar: float = 1.0) -> np.ndarray:
    """``exp(-i H_Qh (t - t_a) / hbar) |A(t_a)>_max`` with ``H_Qh`` the Q-Hermitian part of ``h``."""
    h_qh, _ = decompose_h(m, h)
    return QhPropagator(h_qh, hbar).evolve(a_max_ta, t - t_a)


def central_difference_average(m: QMetric, h_qh, tilde_a_t, o, dt: float, hbar: float = 1.0) -> complex:
    """``(<O>(t + dt) - <O>(t - dt)) / (2 dt)`` for the reduced state evolving under ``h_qh``.

    The two averages are never formed separately.  In the eigenbasis of
    ``h_qh`` each mode pair contributes ``i sin(d dt / hbar) / dt`` times its
    weight, ``d`` being the frequency difference, so the quotient carries the
    full truncation error of the finite difference but no cancellation.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    h_qh = m._check_matrix(h_qh, "h_qh")
    o = m._check_matrix(o, "O")
    _check_normalized(m, tilde_a_t)
    w, v, v_inv = QhPropagator(h_qh, hbar).modes()
    c = v_inv @ np.asarray(tilde_a_t, dtype=np.complex128)
    weight = np.outer(c.conj(), c) * (v.conj().T @ m.q @ o @ v)
    delta = w.conj()[:, None] - w[None, :]
    return complex(np.sum(weight * 1j * np.sin(delta * dt / hbar)) / dt)
