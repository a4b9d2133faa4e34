"""Numba kernel backend; mirrors _numpy_impl exactly."""

import numpy as np
from numba import njit


@njit(cache=True)
def _dp_evolve_jit(counts, step_phase, steps):
    n = counts.shape[0]
    npr = counts.shape[2]
    for _ in range(steps):
        new = np.zeros_like(counts)
        for i in range(n):
            for f in range(n):
                for g in range(n):
                    d = step_phase[f, g]
                    for p in range(npr):
                        new[i, g, (p + d) % npr] += counts[i, f, p]
        counts = new
    return counts


def dp_evolve(counts, step_phase, steps):
    return _dp_evolve_jit(
        np.ascontiguousarray(counts, dtype=np.int64),
        np.ascontiguousarray(step_phase, dtype=np.int64),
        steps,
    )


@njit(cache=True)
def _tally_jit(paths, n, n_prime):
    m, width = paths.shape
    counts = np.zeros((n, n, n_prime), dtype=np.int64)
    for r in range(m):
        p = 0
        for c in range(width - 1):
            d = paths[r, c] - paths[r, c + 1]
            p += d * d
        counts[paths[r, 0], paths[r, width - 1], p % n_prime] += 1
    return counts


def tally_phase_counts(paths, n, n_prime):
    return _tally_jit(np.ascontiguousarray(paths, dtype=np.int64), n, n_prime)


@njit(cache=True)
def _expand_jit(base, n, extra):
    m, width = base.shape
    total = m * n**extra
    out = np.empty((total, width + extra), dtype=np.int64)
    for r in range(total):
        src = r // n**extra
        for c in range(width):
            out[r, c] = base[src, c]
        rem = r % n**extra
        for k in range(extra):
            out[r, width + k] = (rem // n ** (extra - 1 - k)) % n
    return out


def expand_paths(base, n, extra):
    if extra == 0:
        return np.ascontiguousarray(base, dtype=np.int64)
    return _expand_jit(np.ascontiguousarray(base, dtype=np.int64), n, extra)


@njit(cache=True)
def _subset_sums_jit(contrib):
    p, d = contrib.shape
    out = np.zeros((1 << p, d), dtype=np.int64)
    size = 1
    for b in range(p):
        for r in range(size):
            for c in range(d):
                out[size + r, c] = out[r, c] + contrib[b, c]
        size *= 2
    return out


def subset_sums(contrib):
    return _subset_sums_jit(np.ascontiguousarray(contrib, dtype=np.int64))
