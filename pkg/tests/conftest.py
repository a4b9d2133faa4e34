"""Shared helpers: independent brute-force oracles and random generators.

The oracles below enumerate paths and evaluate amplitudes with nothing but
the model constants, so they stay independent of the dynamic-programming and
cyclotomic code paths they are used to check.
"""

from __future__ import annotations

import cmath
import itertools
import random

from qmt_hopper.events import TimeFiniteEvent, canonical, initial_sites
from qmt_hopper.hopper import InitialState, Model


def all_paths(n: int, t: int):
    return [tuple(p) for p in itertools.product(range(n), repeat=t + 1)]


def brute_phase(n_prime: int, path) -> int:
    return sum((a - b) ** 2 for a, b in zip(path, path[1:])) % n_prime


def brute_counts(event: TimeFiniteEvent, t: int):
    """Phase-count tensor by explicit enumeration of every refined path."""
    n, npr = event.model.n, event.model.n_prime
    counts = [[[0] * npr for _ in range(n)] for _ in range(n)]
    for base in event.paths:
        for tail in itertools.product(range(n), repeat=t - event.t):
            path = base + tail
            counts[path[0]][path[-1]][brute_phase(npr, path)] += 1
    return counts


def brute_amplitude_sums(event: TimeFiniteEvent, psi_complex, t: int):
    """Per-final-site amplitude sums, straight from the definition."""
    model = event.model
    n, npr = model.n, model.n_prime
    sums = [0j] * n
    scale = n ** (-t / 2)
    for base in event.paths:
        for tail in itertools.product(range(n), repeat=t - event.t):
            path = base + tail
            p = brute_phase(npr, path)
            sums[path[-1]] += (
                psi_complex[path[0]] * cmath.exp(2j * cmath.pi * p / npr) * scale
            )
    return sums


def brute_measure(event: TimeFiniteEvent, psi_complex, t: int) -> float:
    return sum(abs(v) ** 2 for v in brute_amplitude_sums(event, psi_complex, t))


def state_to_complex(model: Model, psi: InitialState):
    return tuple(psi.amplitude_complex(model, i) for i in range(model.n))


def random_event(
    model: Model,
    rng: random.Random,
    max_t: int = 3,
    nonempty: bool = True,
    no_full_cylinder: bool = False,
) -> TimeFiniteEvent:
    while True:
        t = rng.randint(0, max_t)
        space = all_paths(model.n, t)
        lo = 1 if nonempty else 0
        k = rng.randint(lo, len(space) - 1)
        ev = canonical(TimeFiniteEvent(model, t, tuple(rng.sample(space, k))))
        if nonempty and ev.is_empty():
            continue
        if no_full_cylinder and initial_sites(ev):
            continue
        return ev


def random_exact_state(model: Model, rng: random.Random) -> InitialState:
    while True:
        z = tuple(rng.randint(-3, 3) for _ in range(model.n))
        if any(z):
            break
    q = tuple(rng.randrange(model.n_prime) for _ in range(model.n))
    return InitialState.exact(z, q)


def random_float_state(model: Model, rng: random.Random) -> InitialState:
    amps = [complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(model.n)]
    norm = sum(abs(a) ** 2 for a in amps) ** 0.5
    return InitialState.from_amplitudes([a / norm for a in amps])
