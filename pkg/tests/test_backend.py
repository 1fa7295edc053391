import os
import subprocess
import sys

import numpy as np
import pytest

from catq import _backend, _kernels_py

cy = pytest.importorskip("catq._kernels", reason="compiled extension not built")


def _problem(n=5, r=6, seed=0):
    rng = np.random.default_rng(seed)
    k = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    x = rng.standard_normal((r, n)) + 1j * rng.standard_normal((r, n))
    y = rng.standard_normal((r, n)) + 1j * rng.standard_normal((r, n))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    y /= np.linalg.norm(y, axis=1, keepdims=True)
    return np.ascontiguousarray(k), np.ascontiguousarray(x), np.ascontiguousarray(y)


def test_pga_parity():
    k, x, y = _problem()
    step = 4.0 / np.linalg.norm(k) ** 2
    x1, y1, x2, y2 = x.copy(), y.copy(), x.copy(), y.copy()
    v1, n1, c1 = cy.pga_ascent(k, x1, y1, 500, step, 1e-13, 20)
    v2, n2, c2 = _kernels_py.pga_ascent(k, x2, y2, 500, step, 1e-13, 20)
    np.testing.assert_allclose(v1, v2, rtol=1e-10)
    np.testing.assert_array_equal(n1, n2)
    np.testing.assert_array_equal(c1, c2)
    np.testing.assert_allclose(x1, x2, atol=1e-10)


def test_pga_reaches_top_singular_value():
    k, x, y = _problem(n=4, r=8, seed=3)
    sigma = np.linalg.svd(k, compute_uv=False)[0]
    for mod in (cy, _kernels_py):
        v, _, conv = mod.pga_ascent(k, x.copy(), y.copy(), 4000, 4.0 / np.linalg.norm(k) ** 2, 1e-13, 20)
        assert v.max() == pytest.approx(sigma, rel=1e-9)
        assert v.max() <= sigma * (1 + 1e-12)


def test_current_parity():
    g = np.linspace(-6, 6, 241)
    psi = np.exp(-((g - 0.4) ** 2) / 2 + 0.8j * g + 0.1j * g**2).astype(np.complex128)
    dq = g[1] - g[0]
    np.testing.assert_allclose(cy.probability_current(psi, dq, 1.3, 0.7), _kernels_py.probability_current(psi, dq, 1.3, 0.7), atol=1e-14)


def test_backend_selected_is_cython():
    assert _backend.BACKEND == "cython"


def test_env_var_forces_fallback():
    env = {**os.environ, "CATQ_PURE_PYTHON": "1"}
    out = subprocess.run([sys.executable, "-c", "import catq; print(catq.BACKEND)"], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
