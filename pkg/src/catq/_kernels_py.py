"""Pure-numpy versions of the compiled kernels in ``_kernels.pyx``."""

import numpy as np


def pga_ascent(K, X, Y, iters, step, tol, patience):
    K = np.asarray(K)
    r_count = X.shape[0]
    values = np.zeros(r_count)
    n_iter = np.zeros(r_count, dtype=np.int64)
    converged = np.zeros(r_count, dtype=bool)
    kh = K.conj().T
    for r in range(r_count):
        x, y = X[r], Y[r]
        f_old = -1.0
        calm = 0
        it = 0
        while it < iters:
            kx = K @ x
            khy = kh @ y
            s = np.vdot(y, kx)
            f = s.real**2 + s.imag**2
            if f_old >= 0.0 and abs(f - f_old) <= tol * f:
                calm += 1
                if calm >= patience:
                    break
            else:
                calm = 0
            f_old = f
            x = x + step * s * khy
            y = y + step * np.conj(s) * kx
            x /= np.linalg.norm(x)
            y /= np.linalg.norm(y)
            it += 1
        X[r], Y[r] = x, y
        n_iter[r] = it
        converged[r] = it < iters
        values[r] = abs(np.vdot(y, K @ x))
    return values, n_iter, converged


def probability_current(psi, dq, hbar, mass):
    psi = np.asarray(psi, dtype=np.complex128)
    if psi.shape[0] < 3:
        raise ValueError("need at least 3 grid points")
    d = np.gradient(psi, dq, edge_order=2)
    return (hbar / mass) * (psi.conj() * d).imag
