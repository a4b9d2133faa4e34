#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Runs each hot kernel on a representative workload and prints both timings.
The numba functions are called once first so JIT compilation stays out of the
measurement.
"""

import time

import numpy as np

from qmt_hopper._kernels import _numpy_impl as knp

try:
    from qmt_hopper._kernels import _numba_impl as knb
except ImportError:
    knb = None


def timed(fn, *args, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def workloads():
    n, npr = 3, 3
    counts = np.zeros((n, n, npr), dtype=np.int64)
    counts[0, 0, 0] = 1
    step = np.array(
        [[((f - g) ** 2) % npr for g in range(n)] for f in range(n)], dtype=np.int64
    )
    yield "dp_evolve (n=3, 35 steps)", "dp_evolve", (counts, step, 35)

    base = np.array([[0]], dtype=np.int64)
    yield "expand_paths (4^9 paths)", "expand_paths", (base, 4, 9)

    paths = knp.expand_paths(base, 4, 9)
    yield "tally_phase_counts (262k paths)", "tally_phase_counts", (paths, 4, 8)

    rng = np.random.default_rng(0)
    contrib = rng.integers(-5, 6, size=(18, 8)).astype(np.int64)
    yield "subset_sums (2^18 x 8)", "subset_sums", (contrib,)


def main():
    rows = []
    for label, name, args in workloads():
        t_np = timed(getattr(knp, name), *args)
        if knb is not None:
            getattr(knb, name)(*args)  # compile
            t_nb = timed(getattr(knb, name), *args)
            rows.append((label, t_np, t_nb))
        else:
            rows.append((label, t_np, None))

    width = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{width}}  {'numpy':>10}  {'numba':>10}  {'speedup':>8}")
    for label, t_np, t_nb in rows:
        if t_nb is None:
            print(f"{label:<{width}}  {t_np * 1e3:>8.2f}ms  {'n/a':>10}  {'n/a':>8}")
        else:
            print(
                f"{label:<{width}}  {t_np * 1e3:>8.2f}ms  {t_nb * 1e3:>8.2f}ms  {t_np / t_nb:>7.1f}x"
            )


if __name__ == "__main__":
    main()
