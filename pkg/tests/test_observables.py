import numpy as np
import pytest

from catq import (
    NotNormalizedError,
    RandomSpec,
    VanishingOverlapError,
    build_max_pair,
    build_q,
    central_difference_average,
    decompose_h,
    ehrenfest_rhs,
    eigendecompose,
    normalized_matrix_element,
    q_normalize,
    random_nonnormal,
    reality_sweep,
    tilde_average,
    tilde_state,
)
from catq.qmetric import random_q_hermitian


@pytest.fixture
def case():
    h = random_nonnormal(RandomSpec(dim=5, seed=21, n_pinned=2))
    s = eigendecompose(h)
    return h, s, build_q(s)


def test_two_sided_average_of_identity_is_one(case):
    _, s, m = case
    sol, a, b = build_max_pair(s, m, 0.0, 1.0)
    r = normalized_matrix_element(m, b, np.eye(5), a, 0.0)
    assert r.value == pytest.approx(1.0) and r.kind == "two_sided"


def test_vanishing_overlap(case):
    _, s, m = case
    a = s.diagonalizer[:, 0]
    b = s.diagonalizer[:, 1]
    with pytest.raises(VanishingOverlapError):
        normalized_matrix_element(m, b * 1e-160, np.eye(5), a * 1e-160)


def test_tilde_average_needs_normalized_state(case):
    _, _, m = case
    with pytest.raises(NotNormalizedError):
        tilde_average(m, 2 * q_normalize(m, np.ones(5)), np.eye(5))


def test_reality_sweep_and_negative_control(case):
    _, s, m = case
    assert reality_sweep(s, m, 8, 6, seed=1) < 1e-12
    assert reality_sweep(s, m, 8, 6, seed=1, q_hermitian=False) > 1e-2


def test_reality_sweep_with_weights_and_phases(case):
    _, s, m = case
    r = reality_sweep(s, m, 8, 6, seed=2, weights=[0.3, 0.7], a_phases=[0.0, 1.0], theta_c=0.4)
    assert r < 1e-12


def test_tilde_state_stays_normalized(case):
    h, s, m = case
    v = q_normalize(m, np.arange(5) + 1j)
    for t in (0.0, 1.0, 7.5):
        w = tilde_state(m, h, v, t, 0.0)
        assert tilde_average(m, w, np.eye(5)).value == pytest.approx(1.0, abs=1e-10)


def test_ehrenfest_against_naive_difference(case):
    h, s, m = case
    h_qh, _ = decompose_h(m, h)
    o = random_q_hermitian(m, 9)
    v = q_normalize(m, np.arange(5) + 1j)
    state = tilde_state(m, h, v, 0.3, 0.0)
    dt = 1e-3
    f = lambda t: tilde_average(m, tilde_state(m, h, v, t, 0.0), o).value
    naive = (f(0.3 + dt) - f(0.3 - dt)) / (2 * dt)
    modal = central_difference_average(m, h_qh, state, o, dt)
    assert modal == pytest.approx(naive, abs=1e-10)
    assert modal == pytest.approx(ehrenfest_rhs(m, state, o, h_qh), abs=1e-4)
    with pytest.raises(ValueError):
        central_difference_average(m, h_qh, state, o, 0.0)
