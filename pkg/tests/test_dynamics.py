import numpy as np
import pytest
import scipy.linalg

from catq import (
    BoundaryData,
    DimensionMismatchError,
    QhPropagator,
    RandomSpec,
    TimeOrderError,
    TimeOutOfRangeError,
    build_q,
    decompose_h,
    eigendecompose,
    evolve_a,
    evolve_b,
    evolve_qh,
    expand,
    heisenberg_op,
    inner_q,
    q_adjoint,
    random_nonnormal,
)


@pytest.fixture
def case():
    h = random_nonnormal(RandomSpec(dim=4, seed=11, cond_target=20.0))
    s = eigendecompose(h)
    m = build_q(s)
    rng = np.random.default_rng(2)
    bd = BoundaryData(rng.standard_normal(4) + 1j * rng.standard_normal(4), rng.standard_normal(4) + 0j, 0.5, 2.0)
    return h, s, m, bd


def _rk4(f, y, t0, t1, steps):
    dt = (t1 - t0) / steps
    for _ in range(steps):
        k1 = f(y)
        k2 = f(y + 0.5 * dt * k1)
        k3 = f(y + 0.5 * dt * k2)
        k4 = f(y + dt * k3)
        y = y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return y


def test_evolve_a_matches_expm(case):
    h, s, m, bd = case
    a0 = s.diagonalizer @ bd.a_coeffs
    np.testing.assert_allclose(evolve_a(s, bd, 1.3), scipy.linalg.expm(-1j * h * 0.8) @ a0, atol=1e-11)
    np.testing.assert_allclose(evolve_a(s, bd, bd.t_a), a0, atol=1e-14)


def test_evolve_b_runs_backward_under_q_adjoint(case):
    h, s, m, bd = case
    b_tb = s.diagonalizer @ bd.b_coeffs
    h_adj = q_adjoint(m, h)
    expected = scipy.linalg.expm(-1j * h_adj * (1.1 - bd.t_b)) @ b_tb
    np.testing.assert_allclose(evolve_b(s, m, bd, 1.1), expected, atol=1e-10)


def test_expand_inverts_the_diagonalizer(case):
    _, s, m, bd = case
    np.testing.assert_allclose(expand(s, m, s.diagonalizer @ bd.a_coeffs), bd.a_coeffs, atol=1e-12)


def test_overlap_is_constant(case):
    _, s, m, bd = case
    z = [inner_q(m, evolve_b(s, m, bd, t), evolve_a(s, bd, t)) for t in np.linspace(0.5, 2.0, 7)]
    np.testing.assert_allclose(z, z[0], atol=1e-11)


def test_time_range_is_enforced(case):
    _, s, m, bd = case
    with pytest.raises(TimeOutOfRangeError):
        evolve_a(s, bd, 2.1)
    with pytest.raises(TimeOutOfRangeError):
        evolve_b(s, m, bd, 0.4)
    evolve_a(s, bd, 2.0 + 1e-13)


def test_boundary_data_validation():
    with pytest.raises(TimeOrderError):
        BoundaryData(np.ones(2), np.ones(2), 1.0, 0.0)
    with pytest.raises(DimensionMismatchError):
        BoundaryData(np.ones(2), np.ones(3), 0.0, 1.0)
    with pytest.raises(ValueError):
        BoundaryData(np.ones(2), np.ones(2), 0.0, 1.0, hbar=0.0)


def test_evolve_qh_against_rk4(case):
    h, s, m, _ = case
    h_qh, _ = decompose_h(m, h)
    v = np.array([1, 1j, -0.5, 2.0])
    ref = _rk4(lambda y: -1j * h_qh @ y, v, 0.0, 0.7, 4000)
    np.testing.assert_allclose(evolve_qh(h_qh, v, 0.7), ref, atol=1e-10)


def test_evolve_qh_with_hbar():
    h = np.array([[0, 1], [1, 0]], dtype=complex)
    v = np.array([1, 0], dtype=complex)
    np.testing.assert_allclose(evolve_qh(h, v, 1.0, hbar=2.0), scipy.linalg.expm(-0.5j * h) @ v, atol=1e-14)


def test_heisenberg_op_derivative(case):
    h, s, m, _ = case
    h_qh, _ = decompose_h(m, h)
    o = np.diag([1, 2, 3, 4]).astype(complex)
    dt = 1e-4
    fd = (heisenberg_op(h_qh, o, dt) - heisenberg_op(h_qh, o, -dt)) / (2 * dt)
    np.testing.assert_allclose(fd, 1j * (h_qh @ o - o @ h_qh), atol=1e-6)
    np.testing.assert_array_equal(heisenberg_op(h_qh, o, 0.0), o)


def test_propagator_falls_back_to_expm_for_defective_generators():
    h = np.array([[1, 1], [0, 1]], dtype=complex)
    prop = QhPropagator(h)
    np.testing.assert_allclose(prop.matrix(0.3), scipy.linalg.expm(-0.3j * h), atol=1e-14)
    with pytest.raises(np.linalg.LinAlgError):
        prop.modes()


def test_hermitian_propagator_is_unitary():
    rng = np.random.default_rng(4)
    x = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    u = QhPropagator(x + x.conj().T).matrix(10.0)
    np.testing.assert_allclose(u.conj().T @ u, np.eye(6), atol=1e-13)
