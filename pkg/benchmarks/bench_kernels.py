"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json out.json]
"""

from __future__ import annotations

import argparse
import json
import timeit

import numpy as np

from catq import _kernels_py

try:
    from catq import _kernels as _kernels_cy
except ImportError:
    _kernels_cy = None


def _pga_case(n, restarts, seed=0):
    rng = np.random.default_rng(seed)
    k = np.ascontiguousarray(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    x = rng.standard_normal((restarts, n)) + 1j * rng.standard_normal((restarts, n))
    y = rng.standard_normal((restarts, n)) + 1j * rng.standard_normal((restarts, n))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    y /= np.linalg.norm(y, axis=1, keepdims=True)
    return k, x, y, 4.0 / np.linalg.norm(k) ** 2


def bench_pga(mod, n, restarts, iters, repeat):
    k, x, y, step = _pga_case(n, restarts)

    def run():
        # tol=0 forces the full iteration count so both backends do equal work
        mod.pga_ascent(k, x.copy(), y.copy(), iters, step, 0.0, iters + 1)

    return min(timeit.repeat(run, number=1, repeat=repeat))


def bench_current(mod, points, repeat):
    g = np.linspace(-10, 10, points)
    psi = np.ascontiguousarray(np.exp(-(g**2) / 2 + 0.7j * g))
    dq = g[1] - g[0]
    number = max(1, 200_000 // points)
    return min(timeit.repeat(lambda: mod.probability_current(psi, dq, 1.0, 1.0), number=number, repeat=repeat)) / number


CASES = [
    ("pga_ascent n=4, 64 restarts, 4000 iters", lambda m, r: bench_pga(m, 4, 64, 4000, r)),
    ("pga_ascent n=8, 64 restarts, 4000 iters", lambda m, r: bench_pga(m, 8, 64, 4000, r)),
    ("pga_ascent n=16, 16 restarts, 2000 iters", lambda m, r: bench_pga(m, 16, 16, 2000, r)),
    ("probability_current 512 points", lambda m, r: bench_current(m, 512, r)),
    ("probability_current 8192 points", lambda m, r: bench_current(m, 8192, r)),
]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--repeat", type=int, default=5, help="best-of repetitions per case")
    ap.add_argument("--json", default=None, help="also write the timings to this file")
    args = ap.parse_args(argv)

    rows = []
    print(f"{'case':<44}{'python [s]':>14}{'cython [s]':>14}{'speedup':>10}")
    for name, fn in CASES:
        t_py = fn(_kernels_py, args.repeat)
        t_cy = fn(_kernels_cy, args.repeat) if _kernels_cy is not None else float("nan")
        rows.append({"case": name, "python_s": t_py, "cython_s": t_cy, "speedup": t_py / t_cy})
        print(f"{name:<44}{t_py:>14.3e}{t_cy:>14.3e}{t_py / t_cy:>9.1f}x")
    if _kernels_cy is None:
        print("compiled extension not available; only the fallback was timed")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
