"""Phase-count tables, the decoherence functional and the quantum measure.

The table s[i][f][p] counts the event's t-paths from site i to site f with
phase omega^p.  It is computed by dynamic programming: tally the canonical
paths at the defining time, then apply one-hop updates, so horizons far beyond
anything enumerable stay exact.  The measure of an event is

    mu(E) = sum_f | sum_i psi_i sum_p s[i][f][p] omega^p / n^(t/2) |^2,

so nullity reduces to exact root-of-unity cancellations, decided in the
cyclotomic ring for exact initial states and thresholded for float ones.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as kernels
from .cyclotomic import CycNum
from .errors import PreconditionError
from .events import TimeFiniteEvent, canonical
from .hopper import InitialState, Model

EPS_NULL = 1e-18

INT64_LIMIT = 1 << 62


def step_phase_matrix(model: Model) -> list[list[int]]:
    """step_phase[f][g] = (f-g)^2 mod n', the phase added by one hop f -> g."""
    n, npr = model.n, model.n_prime
    return [[((f - g) ** 2) % npr for g in range(n)] for f in range(n)]


@dataclass(frozen=True)
class PhaseCountTable:
    """Exact path tallies counts[i][f][p]; plain Python ints, never rounded."""

    model: Model
    t: int
    counts: tuple  # nested tuples [i][f][p] of ints

    @classmethod
    def from_lists(cls, model: Model, t: int, counts) -> PhaseCountTable:
        frozen = tuple(tuple(tuple(int(v) for v in row) for row in plane) for plane in counts)
        return cls(model, t, frozen)

    def cell(self, i: int, f: int, p: int) -> int:
        return self.counts[i][f][p]

    def total(self) -> int:
        return sum(v for plane in self.counts for row in plane for v in row)

    def site_amplitude(self, i: int, f: int) -> CycNum:
        """sum_p counts[i][f][p] * omega^p as a plain cyclotomic integer."""
        return CycNum(self.model.n_prime, tuple(self.counts[i][f]))

    def to_json(self) -> dict:
        return {
            "n": self.model.n,
            "t": self.t,
            "counts": [[[str(v) for v in row] for row in plane] for plane in self.counts],
        }

    @classmethod
    def from_json(cls, obj: dict) -> PhaseCountTable:
        return cls.from_lists(Model(int(obj["n"])), int(obj["t"]), obj["counts"])


def _tally_at_own_time(event: TimeFiniteEvent) -> list[list[list[int]]]:
    model = event.model
    n, npr = model.n, model.n_prime
    counts = [[[0] * npr for _ in range(n)] for _ in range(n)]
    for path in event.paths:
        p = sum((a - b) ** 2 for a, b in zip(path, path[1:])) % npr
        counts[path[0]][path[-1]][p] += 1
    return counts


def _dp_evolve_exact(counts, n, npr, step_phase, steps):
    for _ in range(steps):
        new = [[[0] * npr for _ in range(n)] for _ in range(n)]
        for i in range(n):
            for f in range(n):
                row = counts[i][f]
                for g in range(n):
                    d = step_phase[f][g]
                    dest = new[i][g]
                    for p, v in enumerate(row):
                        if v:
                            dest[(p + d) % npr] += v
        counts = new
    return counts


def phase_counts(event: TimeFiniteEvent, t: int) -> PhaseCountTable:
    """Exact s[i][f][p] at time t, without enumerating the refined path set."""
    ev = canonical(event)
    if t < ev.t:
        raise PreconditionError(f"t={t} is below the defining time {ev.t}")
    model = ev.model
    n, npr = model.n, model.n_prime
    steps = t - ev.t
    counts = _tally_at_own_time(ev)
    if steps == 0:
        return PhaseCountTable.from_lists(model, t, counts)
    step_phase = step_phase_matrix(model)
    if len(ev.paths) * n**steps < INT64_LIMIT:
        arr = kernels.dp_evolve(
            np.array(counts, dtype=np.int64), np.array(step_phase, dtype=np.int64), steps
        )
        return PhaseCountTable.from_lists(model, t, arr.tolist())
    counts = _dp_evolve_exact(counts, n, npr, step_phase, steps)
    return PhaseCountTable.from_lists(model, t, counts)


def phase_counts_brute(event: TimeFiniteEvent, t: int) -> PhaseCountTable:
    """Oracle for phase_counts: materialize every refined path and tally it."""
    ev = canonical(event)
    if t < ev.t:
        raise PreconditionError(f"t={t} is below the defining time {ev.t}")
    model = ev.model
    if ev.is_empty():
        zero = [[[0] * model.n_prime for _ in range(model.n)] for _ in range(model.n)]
        return PhaseCountTable.from_lists(model, t, zero)
    if len(ev.paths) * model.n ** (t - ev.t) >= INT64_LIMIT:
        raise PreconditionError("brute-force enumeration is out of range here")
    base = np.array(ev.paths, dtype=np.int64)
    refined = kernels.expand_paths(base, model.n, t - ev.t)
    arr = kernels.tally_phase_counts(refined, model.n, model.n_prime)
    return PhaseCountTable.from_lists(model, t, arr.tolist())


# -- amplitude sums ----------------------------------------------------------


def amplitude_sums_exact(table: PhaseCountTable, psi: InitialState) -> list[CycNum]:
    """Per final site: sum_i (psi_i/c) sum_p s[i][f][p] omega^p, sqrt_n_exp = t."""
    model = table.model
    psi.check_model(model)
    if psi.mode != "exact":
        raise PreconditionError("exact amplitude sums need an exact initial state")
    out = []
    for f in range(model.n):
        acc = CycNum.zero(model.n_prime)
        for i in range(model.n):
            if psi.z[i] == 0:
                continue
            acc = acc + table.site_amplitude(i, f).shifted(psi.q[i]) * psi.z[i]
        out.append(CycNum(acc.order, acc.coeffs, table.t))
    return out


def amplitude_sums_float(table: PhaseCountTable, psi: InitialState) -> np.ndarray:
    model = table.model
    n, npr = model.n, model.n_prime
    roots = np.exp(2j * np.pi * np.arange(npr) / npr)
    amps = np.array([psi.amplitude_complex(model, i) for i in range(n)])
    out = np.zeros(n, dtype=complex)
    for f in range(n):
        for i in range(n):
            row = np.array([float(v) for v in table.counts[i][f]])
            out[f] += amps[i] * (row * roots).sum()
    return out * model.n ** (-table.t / 2)


# -- decoherence functional and measure --------------------------------------


def decoherence(a: TimeFiniteEvent, b: TimeFiniteEvent, psi: InitialState, t: int | None = None):
    """D(A, B) from phase counts at t >= both defining times.

    Exact states give a CycNum with sqrt_n_exp = 2t; float states a complex.
    The value is independent of the choice of t.
    """
    if a.model != b.model:
        raise PreconditionError("events belong to different models")
    ca, cb = canonical(a), canonical(b)
    if t is None:
        t = max(ca.t, cb.t)
    ta = phase_counts(ca, t)
    tb = phase_counts(cb, t)
    if psi.mode == "exact":
        sa = amplitude_sums_exact(ta, psi)
        sb = amplitude_sums_exact(tb, psi)
        acc = CycNum.zero(a.model.n_prime, 2 * t)
        for f in range(a.model.n):
            acc = acc + sa[f] * sb[f].conj()
        return acc
    sa = amplitude_sums_float(ta, psi)
    sb = amplitude_sums_float(tb, psi)
    return complex((sa * sb.conj()).sum())


@dataclass(frozen=True)
class MeasureResult:
    mode: str
    numeric: float
    is_zero: bool
    thresholded: bool
    per_final_site: tuple[float, ...]
    exact: CycNum | None = None

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "mu_numeric": self.numeric,
            "is_zero": self.is_zero,
            "thresholded": self.thresholded,
            "per_final_site": list(self.per_final_site),
            "mu_exact": self.exact.to_json() if self.exact is not None else None,
        }


def measure_table(
    table: PhaseCountTable,
    psi: InitialState,
    c_sq: float | None = None,
    eps_null: float = EPS_NULL,
) -> MeasureResult:
    model = table.model
    if psi.mode == "exact":
        sums = amplitude_sums_exact(table, psi)
        if c_sq is None:
            c_sq = 1.0 / psi.norm_sq_exact()
        per_site = []
        total = CycNum.zero(model.n_prime, 2 * table.t)
        zero = True
        for amp in sums:
            sq = amp.abs_sq()
            total = total + sq
            per_site.append(sq.to_complex(model.n).real * c_sq)
            zero = zero and amp.is_zero()
        numeric = max(total.to_complex(model.n).real * c_sq, 0.0) if not zero else 0.0
        return MeasureResult("exact", numeric, zero, False, tuple(per_site), total)
    sums = amplitude_sums_float(table, psi)
    per_site = tuple(float(abs(v) ** 2) for v in sums)
    numeric = float(sum(per_site))
    return MeasureResult("float", numeric, numeric < eps_null, True, per_site)


def measure(
    event: TimeFiniteEvent,
    psi: InitialState,
    c_sq: float | None = None,
    eps_null: float = EPS_NULL,
) -> MeasureResult:
    """Quantum measure mu(E) = D(E, E), with exact nullity in exact mode."""
    ev = canonical(event)
    return measure_table(phase_counts(ev, ev.t), psi, c_sq, eps_null)


def is_null(event: TimeFiniteEvent, psi: InitialState, eps_null: float = EPS_NULL) -> bool:
    return measure(event, psi, eps_null=eps_null).is_zero


def universal_null_from_counts(table: PhaseCountTable) -> bool:
    model = table.model
    n, npr = model.n, model.n_prime
    for i in range(n):
        for f in range(n):
            row = table.counts[i][f]
            if n % 2 == 0:
                if any(row[p] != row[(p + n) % npr] for p in range(npr)):
                    return False
            else:
                if any(v != row[0] for v in row):
                    return False
    return True


def is_null_universal(event: TimeFiniteEvent) -> bool:
    """Sufficient check for nullity under every initial state.

    Odd n: per (i, f) the counts must agree across all phases; even n: counts
    must agree between p and p+n.  One-directional: states can conspire to
    cancel even when this fails.
    """
    ev = canonical(event)
    return universal_null_from_counts(phase_counts(ev, ev.t))
