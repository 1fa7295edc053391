# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops.  Semantics must match ``_kernels_py`` exactly."""

import numpy as np

from libc.math cimport sqrt, fabs

ctypedef double complex cplx


cdef inline double _abs2(cplx z) noexcept nogil:
    return z.real * z.real + z.imag * z.imag


cdef inline cplx _conj(cplx z) noexcept nogil:
    return z.conjugate()


cdef void _normalize_row(cplx[:, ::1] v, Py_ssize_t r, Py_ssize_t n) noexcept nogil:
    cdef double s = 0.0
    cdef Py_ssize_t i
    for i in range(n):
        s += _abs2(v[r, i])
    s = sqrt(s)
    for i in range(n):
        v[r, i] = v[r, i] / s


def pga_ascent(const cplx[:, ::1] K, cplx[:, ::1] X, cplx[:, ::1] Y,
               Py_ssize_t iters, double step, double tol, Py_ssize_t patience):
    """Projected gradient ascent of ``|y^H K x|^2`` over pairs of unit vectors.

    Rows of ``X`` and ``Y`` are independent restarts, updated in place.
    Returns ``(values, iterations, converged)`` per restart, where ``values``
    holds ``|y^H K x|`` at the final iterate.
    """
    cdef Py_ssize_t r_count = X.shape[0]
    cdef Py_ssize_t n = X.shape[1]
    cdef Py_ssize_t r, it, i, j, calm
    cdef cplx s, acc
    cdef double f, f_old
    values_np = np.zeros(r_count, dtype=np.float64)
    iters_np = np.zeros(r_count, dtype=np.int64)
    conv_np = np.zeros(r_count, dtype=np.bool_)
    cdef double[::1] values = values_np
    cdef long long[::1] n_iter = iters_np
    kx_np = np.empty(n, dtype=np.complex128)
    khy_np = np.empty(n, dtype=np.complex128)
    cdef cplx[::1] kx = kx_np
    cdef cplx[::1] khy = khy_np

    with nogil:
        for r in range(r_count):
            f_old = -1.0
            calm = 0
            it = 0
            while it < iters:
                for i in range(n):
                    acc = 0
                    for j in range(n):
                        acc = acc + K[i, j] * X[r, j]
                    kx[i] = acc
                for j in range(n):
                    acc = 0
                    for i in range(n):
                        acc = acc + _conj(K[i, j]) * Y[r, i]
                    khy[j] = acc
                s = 0
                for i in range(n):
                    s = s + _conj(Y[r, i]) * kx[i]
                f = _abs2(s)
                if f_old >= 0.0 and fabs(f - f_old) <= tol * f:
                    calm += 1
                    if calm >= patience:
                        break
                else:
                    calm = 0
                f_old = f
                for i in range(n):
                    X[r, i] = X[r, i] + step * s * khy[i]
                    Y[r, i] = Y[r, i] + step * _conj(s) * kx[i]
                _normalize_row(X, r, n)
                _normalize_row(Y, r, n)
                it += 1
            n_iter[r] = it
            # final value at the returned iterate
            s = 0
            for i in range(n):
                acc = 0
                for j in range(n):
                    acc = acc + K[i, j] * X[r, j]
                s = s + _conj(Y[r, i]) * acc
            values[r] = sqrt(_abs2(s))
    for r in range(r_count):
        conv_np[r] = iters_np[r] < iters
    return values_np, iters_np, conv_np


def probability_current(const cplx[::1] psi, double dq, double hbar, double mass):
    """``(hbar/m) Im(conj(psi) dpsi/dq)`` with second-order differences.

    Central differences inside, second-order one-sided at the two ends.
    """
    cdef Py_ssize_t n = psi.shape[0]
    cdef Py_ssize_t k
    cdef cplx d
    cdef double c = hbar / mass
    out_np = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_np
    if n < 3:
        raise ValueError("need at least 3 grid points")
    with nogil:
        for k in range(1, n - 1):
            d = (psi[k + 1] - psi[k - 1]) / (2.0 * dq)
            out[k] = c * (_conj(psi[k]) * d).imag
        d = (-3.0 * psi[0] + 4.0 * psi[1] - psi[2]) / (2.0 * dq)
        out[0] = c * (_conj(psi[0]) * d).imag
        d = (3.0 * psi[n - 1] - 4.0 * psi[n - 2] + psi[n - 3]) / (2.0 * dq)
        out[n - 1] = c * (_conj(psi[n - 1]) * d).imag
    return out_np
