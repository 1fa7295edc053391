"""Invariants checked over hypothesis-generated Hamiltonians."""

import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from catq import (
    BoundaryData,
    RandomSpec,
    build_max_pair,
    build_q,
    decompose_h,
    eigendecompose,
    evolve_a,
    evolve_b,
    format_matrix,
    inner_q,
    parse_matrix,
    q_adjoint,
    q_normality_residual,
    random_nonnormal,
)

specs = st.builds(
    RandomSpec,
    dim=st.integers(2, 10),
    seed=st.integers(0, 2**32 - 1),
    im_upper=st.floats(-2, 2),
    im_spread=st.floats(0.05, 3),
    cond_target=st.floats(1, 1e3),
    n_pinned=st.just(1),
)

fast = settings(max_examples=60, deadline=None)


@fast
@given(specs)
def test_metric_orthonormalizes_and_h_is_q_normal(spec):
    h = random_nonnormal(spec)
    s = eigendecompose(h)
    m = build_q(s)
    p = s.diagonalizer
    assert np.linalg.norm(p.conj().T @ m.q @ p - np.eye(spec.dim)) <= 1e-9
    assert q_normality_residual(m, h) <= 1e-9


@fast
@given(specs)
def test_q_hermitian_part_is_q_hermitian(spec):
    h = random_nonnormal(spec)
    s = eigendecompose(h)
    m = build_q(s)
    h_qh, h_qa = decompose_h(m, h)
    # Q^-1 (.)^dagger Q amplifies rounding by cond(Q) = cond(P)^2
    scale = np.linalg.norm(h) * s.cond_p**2
    assert np.linalg.norm(q_adjoint(m, h_qh) - h_qh) <= 1e-13 * scale
    assert np.linalg.norm(q_adjoint(m, h_qa) + h_qa) <= 1e-13 * scale


@fast
@given(specs, st.floats(0.1, 3.0), st.floats(0.5, 2.0))
def test_bound_is_saturated(spec, duration, hbar):
    s = eigendecompose(random_nonnormal(spec))
    m = build_q(s)
    sol, _, _ = build_max_pair(s, m, 0.0, duration, hbar)
    bd = sol.boundary_data(s.dim)
    amp = abs(inner_q(m, evolve_b(s, m, bd, duration / 2), evolve_a(s, bd, duration / 2)))
    assert math.isclose(amp, math.exp(sol.bound_b * duration / hbar), rel_tol=1e-10)


@fast
@given(specs, st.integers(0, 2**32 - 1))
def test_generic_pairs_never_beat_the_bound(spec, seed):
    s = eigendecompose(random_nonnormal(spec))
    m = build_q(s)
    rng = np.random.default_rng(seed)
    n = s.dim
    # Q-normalized states have unit-norm eigen-coefficients
    a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    b = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    bd = BoundaryData(a / np.linalg.norm(a), b / np.linalg.norm(b), 0.0, 1.0)
    amp = abs(inner_q(m, evolve_b(s, m, bd, 0.0), evolve_a(s, bd, 0.0)))
    assert amp <= math.exp(s.eigenvalues.imag.max()) * (1 + 1e-10)


@fast
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_matrix_text_round_trip_is_exact(n, seed):
    rng = np.random.default_rng(seed)
    h = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) * 10.0 ** rng.integers(-30, 30, (n, n))
    np.testing.assert_array_equal(parse_matrix(format_matrix(h)), h)
