"""Benchmark the JIT-compiled kernels against the pure-Python/numpy path.

Run after installing the package::

    python benchmarks/bench_kernels.py

The same workloads drive both variants of every kernel, so the table at
the end shows the speedup the ``GEADIM_USE_NUMBA`` flag is buying.
"""

import time

import numpy as np

from geadim import _kernels as K
from geadim import core


def _chain(n):
    """The n-chain: i + j = i + j when the total stays below n."""
    table = np.full((n, n), -1, dtype=np.int8)
    for i in range(n):
        for j in range(n):
            if i + j < n:
                table[i, j] = i + j
    return table


def _leq(table):
    n = table.shape[0]
    leq = np.zeros((n, n), dtype=np.bool_)
    for e in range(n):
        for d in range(n):
            if table[e, d] >= 0:
                leq[e, table[e, d]] = True
    return leq


def _diff(table):
    n = table.shape[0]
    diff = np.full((n, n), -1, dtype=np.int8)
    for e in range(n):
        for d in range(n):
            v = table[e, d]
            if v >= 0:
                diff[v, e] = d
    return diff


def bench(label, fn_py, fn_jit, args, repeat):
    if fn_jit is not None:
        fn_jit(*args)  # compile outside the timed region
    t0 = time.perf_counter()
    for _ in range(repeat):
        ref = fn_py(*args)
    t_py = (time.perf_counter() - t0) / repeat
    if fn_jit is None:
        print(f"{label:26s} python {t_py * 1e3:9.3f} ms   (numba unavailable)")
        return
    t0 = time.perf_counter()
    for _ in range(repeat):
        out = fn_jit(*args)
    t_jit = (time.perf_counter() - t0) / repeat
    assert np.array_equal(np.asarray(ref), np.asarray(out)), label
    print(
        f"{label:26s} python {t_py * 1e3:9.3f} ms   numba {t_jit * 1e3:9.3f} ms"
        f"   x{t_py / t_jit:7.1f}"
    )


def main():
    print(f"numba available: {K.HAVE_NUMBA}; active path: "
          f"{'numba' if K.USE_NUMBA else 'python'}")
    c6 = _chain(6)
    bench("axiom_violation n=6", K.axiom_violation_py, K.axiom_violation_jit,
          (c6,), repeat=200)
    empty = np.empty(0, dtype=np.int8)
    bench("enumerate_tables n=5", K.enumerate_tables_py, K.enumerate_tables_jit,
          (5, empty), repeat=3)
    bench("enumerate_tables n=6", K.enumerate_tables_py, K.enumerate_tables_jit,
          (6, empty), repeat=1)
    c5 = _chain(5)
    bench("brute_exomaps n=5", K.brute_exomaps_py, K.brute_exomaps_jit,
          (c5, _leq(c5)), repeat=3)
    cls = np.array([0, 1, 1, 2, 2, 3], dtype=np.int8)
    bench("sk_witnesses n=6", K.sk_witnesses_py, K.sk_witnesses_jit,
          (c6, _diff(c6), _leq(c6), cls), repeat=20)
    B4 = core.b4()
    perms = core._candidate_perms(B4)
    flat = np.ascontiguousarray(B4.sum.reshape(16))
    bench("min_relabel n=4", K.min_relabel_py, K.min_relabel_jit,
          (flat, 4, perms), repeat=500)


if __name__ == "__main__":
    main()
