"""Pure-numpy kernel backend."""

import numpy as np


def dp_evolve(counts, step_phase, steps):
    """Evolve a phase-count tensor counts[i, f, p] by `steps` one-hop updates.

    One step sends counts[i, f, p] to counts[i, g, (p + step_phase[f, g]) % n'].
    """
    counts = np.asarray(counts, dtype=np.int64)
    n = counts.shape[0]
    for _ in range(steps):
        new = np.zeros_like(counts)
        for f in range(n):
            for g in range(n):
                new[:, g, :] += np.roll(counts[:, f, :], step_phase[f, g], axis=1)
        counts = new
    return counts


def tally_phase_counts(paths, n, n_prime):
    """Tally paths[m, t+1] into counts[i, f, p] by start, end and phase."""
    paths = np.asarray(paths, dtype=np.int64)
    diffs = paths[:, :-1] - paths[:, 1:]
    if diffs.shape[1]:
        phases = (diffs * diffs).sum(axis=1) % n_prime
    else:
        phases = np.zeros(paths.shape[0], dtype=np.int64)
    counts = np.zeros((n, n, n_prime), dtype=np.int64)
    np.add.at(counts, (paths[:, 0], paths[:, -1], phases), 1)
    return counts


def expand_paths(base, n, extra):
    """All one-site extensions of each row, applied `extra` times, in lex order."""
    out = np.asarray(base, dtype=np.int64)
    for _ in range(extra):
        m = out.shape[0]
        rep = np.repeat(out, n, axis=0)
        tail = np.tile(np.arange(n, dtype=np.int64), m)[:, None]
        out = np.concatenate([rep, tail], axis=1)
    return out


def subset_sums(contrib):
    """Sums of every subset of the rows of contrib[P, D], indexed by bitmask."""
    contrib = np.asarray(contrib, dtype=np.int64)
    p, d = contrib.shape
    out = np.zeros((1 << p, d), dtype=np.int64)
    size = 1
    for b in range(p):
        out[size : 2 * size] = out[:size] + contrib[b]
        size *= 2
    return out
