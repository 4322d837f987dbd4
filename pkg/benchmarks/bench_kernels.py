"""Benchmark the numba kernels against the pure-numpy fallback.

Runs each hot kernel on a representative workload with both backends and
prints wall times and speedups.  Invoke from the repository root:

    python benchmarks/bench_kernels.py

(The numba path JIT-compiles on first call; a warmup run is excluded from
the timings.  With POINTBETHE_NO_NUMBA=1 only the numpy path is timed.)
"""

from __future__ import annotations

import math
import time

import numpy as np

from pointbethe import CouplingParameters, _kernels, bethe_state
from pointbethe.permutations import symmetric_group

REPEATS = 3


def _time(fn, *args):
    best = math.inf
    for _ in range(REPEATS):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_factorization_panel():
    rng = np.random.default_rng(0)
    grid = rng.uniform(-3, 3, (625, 4))
    panel = _kernels.sample_panel(0, 100)
    args = (grid, panel[:, 0].copy(), panel[:, 1].copy())
    return "factorization panel (625 points x 100 samples)", args


def bench_eval_grid():
    n = 5
    params = CouplingParameters(2.0, 0.0, 0.0, 1.3)
    k = np.array([1.7, 0.9, 0.2, -0.6, -1.4])
    a = np.zeros(math.factorial(n), dtype=np.complex128)
    a[0] = 1.0
    state = bethe_state(params, k, a)
    rng = np.random.default_rng(1)
    points = rng.uniform(-3, 3, (20000, n))
    tables = symmetric_group(n)
    args = (points, k, state.table, tables.images, tables.lehmer_to_index)
    return "wavefunction grid (N=5, 20000 points)", args


def bench_propagate_table():
    n = 6
    params = CouplingParameters(1.5, 0.0, 0.0, 0.7)
    k = np.array([2.1, 1.3, 0.6, -0.2, -1.0, -1.9])
    tables = symmetric_group(n)
    srp, srm, stp, stm = _kernels.pair_amplitude_tables(params, k)
    a = np.zeros(tables.order, dtype=np.complex128)
    a[0] = 1.0
    args = (a, tables.decomp_flat, tables.decomp_offsets, tables.tmaps,
            tables.asc, srp, srm, stp, stm)
    return "coefficient table (N=6, 720x720)", args


KERNELS = [
    ("factorization_panel", bench_factorization_panel),
    ("eval_grid", bench_eval_grid),
    ("propagate_table", bench_propagate_table),
]


def main():
    print(f"active backend: {_kernels.BACKEND}")
    rows = []
    for name, setup in KERNELS:
        label, args = setup()
        numpy_fn = getattr(_kernels, f"{name}_numpy")
        t_numpy = _time(numpy_fn, *args)
        if _kernels.HAVE_NUMBA:
            numba_fn = getattr(_kernels, f"{name}_numba")
            numba_fn(*args)  # warmup / JIT
            t_numba = _time(numba_fn, *args)
            ref = numpy_fn(*args)
            got = numba_fn(*args)
            assert np.allclose(ref, got, atol=1e-12), f"backend mismatch in {name}"
            rows.append((label, t_numpy, t_numba, t_numpy / t_numba))
        else:
            rows.append((label, t_numpy, None, None))

    width = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{width}}  {'numpy':>10}  {'numba':>10}  {'speedup':>8}")
    for label, t_np, t_nb, speedup in rows:
        if t_nb is None:
            print(f"{label:<{width}}  {t_np * 1e3:>8.2f}ms  {'-':>10}  {'-':>8}")
        else:
            print(f"{label:<{width}}  {t_np * 1e3:>8.2f}ms  {t_nb * 1e3:>8.2f}ms  {speedup:>7.1f}x")


if __name__ == "__main__":
    main()
