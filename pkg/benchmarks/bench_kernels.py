"""
Compare the numba-compiled kernels with their interpreted fallbacks.

    python benchmarks/bench_kernels.py [--repeat R] [--sizes 10 14 18]

Each kernel is run once before timing so JIT compilation is excluded; the
interpreted path is the same source called through ``.py_func``. Both paths
must return identical results, which is checked before a row is printed.
"""

import argparse
import time

import numpy as np

from msgdetour import _kernels
from msgdetour._accel import USE_NUMBA, backend
from msgdetour.families import er_random
from msgdetour.mdnn import laplacian


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def detour_case(n, p, k):
    g = er_random(n, p, seed=n)
    indptr, indices = g.csr

    def make(fn):
        def call():
            out = np.zeros(len(indices), dtype=np.int64)
            states = fn(indptr, indices, g.n, k, 0, g.n, out, 10**9)
            return states, out
        return call

    return f"detour n={n} p={p} k={k}", make(_kernels.detour_slot_counts), make(
        _kernels.detour_slot_counts.py_func
    )


def bfs_case(n, p):
    g = er_random(n, p, seed=n)
    indptr, indices = g.csr
    return (
        f"bfs all-pairs n={n} p={p}",
        lambda: _kernels.bfs_all_pairs(indptr, indices, g.n),
        lambda: _kernels.bfs_all_pairs.py_func(indptr, indices, g.n),
    )


def jacobi_case(n):
    lap = laplacian(er_random(n, 0.3, seed=n))
    return (
        f"jacobi eigh n={n}",
        lambda: _kernels.jacobi_eigh(lap, 1e-10, 100),
        lambda: _kernels.jacobi_eigh.py_func(lap, 1e-10, 100),
    )


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray) and a.dtype.kind == "f":
        return np.allclose(a, b, atol=1e-10)
    return np.array_equal(a, b)


def main():
    ap = argparse.ArgumentParser(description=__doc__.strip().splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--sizes", type=int, nargs="+", default=[10, 14, 18])
    args = ap.parse_args()
    if not USE_NUMBA:
        raise SystemExit("numba is disabled (MSGDETOUR_DISABLE_NUMBA); nothing to compare")

    cases = []
    for n in args.sizes:
        cases.append(detour_case(n, 0.3, 5))
        cases.append(bfs_case(4 * n, 0.1))
        cases.append(jacobi_case(2 * n))

    print(f"backend: {backend()}, best of {args.repeat}")
    print(f"{'kernel':<32}{'numba [ms]':>12}{'python [ms]':>13}{'speedup':>10}")
    print("-" * 67)
    for name, jit_fn, py_fn in cases:
        jit_fn()  # compile / load cache
        t_jit, r_jit = best_of(jit_fn, args.repeat)
        t_py, r_py = best_of(py_fn, args.repeat)
        if not same(r_jit, r_py):
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:<32}{1e3 * t_jit:>12.3f}{1e3 * t_py:>13.3f}{t_py / t_jit:>9.1f}x")


if __name__ == "__main__":
    main()
