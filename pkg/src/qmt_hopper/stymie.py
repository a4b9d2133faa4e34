"""Constructive null supersets: given a non-trivial time-finite event, build a
strictly larger time-finite event of exactly zero measure, with a verifiable
certificate.

The construction picks a horizon where the transfer matrix's exact periodicity
makes the event's amplitude sums reappear unchanged, then selects paths from
the complement whose amplitudes complete every phase class to a full (hence
vanishing) root-of-unity sum.  Selected paths are generated in three regions:
a complement prefix at the defining time, a free middle segment, and a
zig-zag tail of 2(n-1) steps whose k zig-zags contribute phase 2k, which tunes
the total phase to any required class.  Certificates store the target counts
and the deterministic generator allocation, so verification can re-derive
everything from scratch.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cyclotomic import CycNum
from .errors import LimitExceededError, ParseError, PreconditionError
from .events import (
    TimeFiniteEvent,
    canonical,
    complement,
    full_event,
    start_counts,
)
from .hopper import InitialState, Model, path_phase
from .measure import PhaseCountTable, measure_table, phase_counts

M_MAX_DEFAULT = 4
BIG_M_MAX_DEFAULT = 6
MATERIALIZE_CAP_DEFAULT = 10**6
_MID_GRID_CAP = 1 << 21


def zigzag_tail(model: Model, f: int, k: int) -> tuple[int, ...]:
    """A 2(n-1)-step segment from f back to f: k zig-zags f -> f+1 -> f, then
    constant; its phase is 2k mod n'."""
    model.check_site(f)
    if not 0 <= k <= model.n - 1:
        raise PreconditionError(f"zig-zag count {k} out of range 0..{model.n - 1}")
    sites = [f]
    for _ in range(k):
        sites.append((f + 1) % model.n)
        sites.append(f)
    sites.extend([f] * (2 * (model.n - 1) - 2 * k))
    return tuple(sites)


def count_lower_bound(event: TimeFiniteEvent, t: int) -> list[list[list[int]]]:
    """Guaranteed floor for the phase counts at time t: paths through a free
    middle and a zig-zag tail give c_i * n^(t - t_def - 2n + 1) per admissible
    phase class."""
    ev = canonical(event)
    model = ev.model
    n, npr = model.n, model.n_prime
    if t < ev.t + 2 * n - 1:
        raise PreconditionError(
            f"the bound needs t >= t_def + 2n - 1 = {ev.t + 2 * n - 1}, got {t}"
        )
    starts = start_counts(ev)
    per_class = n ** (t - ev.t - 2 * n + 1)
    bound = [[[0] * npr for _ in range(n)] for _ in range(n)]
    for i in range(n):
        if starts[i] == 0:
            continue
        for f in range(n):
            for p in model.admissible_phases(i, f):
                bound[i][f][p] = starts[i] * per_class
    return bound


# -- certificates -------------------------------------------------------------


@dataclass(frozen=True)
class CellAlloc:
    """Generator allocation for one (start, end, phase) cell: entries are
    (prefix index within the complement paths starting at `i`, zig-zag count,
    number of middle segments taken in lexicographic order)."""

    i: int
    f: int
    p: int
    entries: tuple[tuple[int, int, int], ...]


@dataclass(frozen=True)
class StymieCertificate:
    mode: str  # "universal" | "initial"
    base: TimeFiniteEvent  # canonical
    m: int
    horizon: int  # time of the added paths: t_def + 4nm, or T = 4nM
    required: tuple  # [i][f][p] target counts for the added event
    generators: tuple[CellAlloc, ...]
    superset_counts: PhaseCountTable  # counts of E union G at the horizon
    mu_exact: CycNum  # exact measure of the superset (a zero of the ring)
    i_check: int | None = None
    state: InitialState | None = None  # exact, phases normalized at i_check
    t_mid: int | None = None  # 4nm horizon the event side is evolved to
    big_m: int | None = None

    @property
    def model(self) -> Model:
        return self.base.model

    def added_total(self) -> int:
        return sum(v for plane in self.required for row in plane for v in row)

    def to_json(self) -> dict:
        obj = {
            "schema": "qmt-hopper/1",
            "kind": "stymie-certificate",
            "mode": self.mode,
            "n": self.model.n,
            "event": self.base.to_json(),
            "m": self.m,
            "horizon": self.horizon,
            "required": [
                [[str(v) for v in row] for row in plane] for plane in self.required
            ],
            "generators": [
                {
                    "i": c.i,
                    "f": c.f,
                    "p": c.p,
                    "alloc": [[idx, k, str(take)] for idx, k, take in c.entries],
                }
                for c in self.generators
            ],
            "superset_counts": self.superset_counts.to_json(),
            "mu_exact": self.mu_exact.to_json(),
        }
        if self.mode == "initial":
            obj["i_check"] = self.i_check
            obj["state"] = self.state.to_json()
            obj["t_mid"] = self.t_mid
            obj["big_m"] = self.big_m
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> StymieCertificate:
        try:
            base = TimeFiniteEvent.from_json(obj["event"])
            required = tuple(
                tuple(tuple(int(v) for v in row) for row in plane)
                for plane in obj["required"]
            )
            generators = tuple(
                CellAlloc(
                    int(c["i"]),
                    int(c["f"]),
                    int(c["p"]),
                    tuple((int(a), int(k), int(t)) for a, k, t in c["alloc"]),
                )
                for c in obj["generators"]
            )
            return cls(
                mode=obj["mode"],
                base=base,
                m=int(obj["m"]),
                horizon=int(obj["horizon"]),
                required=required,
                generators=generators,
                superset_counts=PhaseCountTable.from_json(obj["superset_counts"]),
                mu_exact=CycNum.from_json(obj["mu_exact"]),
                i_check=obj.get("i_check"),
                state=InitialState.from_json(obj["state"]) if "state" in obj else None,
                t_mid=obj.get("t_mid"),
                big_m=obj.get("big_m"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed certificate: {exc}") from exc


# -- shared machinery ---------------------------------------------------------


def _prefixes_by_site(ebar: TimeFiniteEvent) -> list[list[tuple[int, ...]]]:
    out = [[] for _ in range(ebar.model.n)]
    for p in ebar.paths:  # already lex sorted
        out[p[0]].append(p)
    return out


def _zero_table(model: Model) -> list[list[list[int]]]:
    n, npr = model.n, model.n_prime
    return [[[0] * npr for _ in range(n)] for _ in range(n)]


def _freeze(table) -> tuple:
    return tuple(tuple(tuple(row) for row in plane) for plane in table)


def _add_counts(a: PhaseCountTable, b) -> PhaseCountTable:
    model = a.model
    n, npr = model.n, model.n_prime
    out = [
        [[a.counts[i][f][p] + b[i][f][p] for p in range(npr)] for f in range(n)]
        for i in range(n)
    ]
    return PhaseCountTable.from_lists(model, a.t, out)


def _fits(required, table: PhaseCountTable) -> bool:
    n, npr = table.model.n, table.model.n_prime
    return all(
        required[i][f][p] <= table.counts[i][f][p]
        for i in range(n)
        for f in range(n)
        for p in range(npr)
    )


def _allocate(
    model: Model,
    required,
    prefixes_by_site,
    prefix_phases,
    mid_counts: PhaseCountTable,
) -> tuple[CellAlloc, ...] | None:
    """Deterministic generator allocation: prefixes in lex order, zig-zag
    counts ascending, middles as a leading slice of their phase class.
    Returns None when the three-region form cannot supply some cell."""
    n, npr = model.n, model.n_prime
    cells = []
    for i in range(n):
        for f in range(n):
            for p in range(npr):
                remaining = required[i][f][p]
                if remaining == 0:
                    continue
                entries = []
                for idx, pref in enumerate(prefixes_by_site[i]):
                    j = pref[-1]
                    q1 = prefix_phases[i][idx]
                    for k in range(n):
                        q2 = (p - q1 - 2 * k) % npr
                        avail = mid_counts.cell(j, f, q2)
                        if avail == 0:
                            continue
                        take = min(remaining, avail)
                        entries.append((idx, k, take))
                        remaining -= take
                        if remaining == 0:
                            break
                    if remaining == 0:
                        break
                if remaining:
                    return None
                cells.append(CellAlloc(i, f, p, tuple(entries)))
    return tuple(cells)


def _mid_table(model: Model, steps: int) -> PhaseCountTable:
    # s[j][f][q] over all free paths of `steps` hops
    return phase_counts(full_event(model), steps)


def _uniform_state(model: Model) -> InitialState:
    return InitialState.exact([1] * model.n, [0] * model.n)


# -- the universal construction -----------------------------------------------


def build_null_superset(
    event: TimeFiniteEvent, m_max: int = M_MAX_DEFAULT
) -> StymieCertificate:
    """Null superset valid for every initial state.

    Requires a non-empty event that contains no whole single-site cylinder.
    The horizon is t_def + 4nm for the smallest workable m <= m_max; the added
    counts are n^(2nm) * (max_q s_q - s_p) per admissible phase class, which
    completes each class to a vanishing root-of-unity sum.
    """
    ev = canonical(event)
    model = ev.model
    n, npr = model.n, model.n_prime
    if ev.is_empty():
        raise PreconditionError("cannot build a null superset of the empty event")
    starts = start_counts(ev)
    whole = n**ev.t
    covered = [i for i in range(n) if starts[i] == whole]
    if covered:
        raise PreconditionError(
            f"event contains the whole cylinder of initial site(s) {covered}"
        )
    t_def = ev.t
    s_e = phase_counts(ev, t_def)
    ebar = complement(ev)
    if ebar.t != t_def:
        raise RuntimeError("complement landed at an unexpected defining time")
    prefixes = _prefixes_by_site(ebar)
    prefix_phases = [[path_phase(model, p) for p in lst] for lst in prefixes]

    for m in range(1, m_max + 1):
        t = t_def + 4 * n * m
        scale = n ** (2 * n * m)
        required = _zero_table(model)
        for i in range(n):
            for f in range(n):
                adm = model.admissible_phases(i, f)
                row = s_e.counts[i][f]
                peak = max(row[p] for p in adm)
                for p in adm:
                    required[i][f][p] = scale * (peak - row[p])
        if not _fits(required, phase_counts(ebar, t)):
            continue
        mid = _mid_table(model, t - t_def - 2 * (n - 1))
        alloc = _allocate(model, required, prefixes, prefix_phases, mid)
        if alloc is None:
            continue
        superset = _add_counts(phase_counts(ev, t), required)
        for i in range(n):
            for f in range(n):
                if not superset.site_amplitude(i, f).is_zero():
                    raise RuntimeError("construction lost a phase cancellation")
        mu = measure_table(superset, _uniform_state(model))
        if not mu.is_zero:
            raise RuntimeError("constructed superset is not null")
        return StymieCertificate(
            mode="universal",
            base=ev,
            m=m,
            horizon=t,
            required=_freeze(required),
            generators=alloc,
            superset_counts=superset,
            mu_exact=mu.exact,
        )
    raise LimitExceededError(f"no null superset found with m <= {m_max}")


# -- the initial-state variant --------------------------------------------------


def build_null_superset_initial(
    event: TimeFiniteEvent,
    psi: InitialState,
    i_check: int,
    m_max: int = M_MAX_DEFAULT,
    big_m_max: int = BIG_M_MAX_DEFAULT,
) -> StymieCertificate:
    """Null superset of an "initial position" event, for odd n and exact
    amplitudes z_i omega^(q_i).

    The event must contain every cylinder except site i_check's; the added
    paths (all starting at i_check) cancel both the event's own amplitudes and
    the surviving single-site terms, which requires z_{i_check} to divide
    n^(T/2) z_f at the chosen horizon T = 4nM.
    """
    ev = canonical(event)
    model = ev.model
    n, npr = model.n, model.n_prime
    if n % 2 == 0:
        raise PreconditionError(
            "initial-position stymieing is not supported for even n: the parity "
            "classes block the required phase choices"
        )
    if psi.mode != "exact":
        raise PreconditionError("an exact initial state is required")
    psi.check_model(model)
    model.check_site(i_check)
    starts = start_counts(ev)
    whole = n**ev.t
    bad = [i for i in range(n) if (starts[i] == whole) != (i != i_check)]
    if bad:
        raise PreconditionError(
            f"event must contain exactly the cylinders of all sites but {i_check}; "
            f"mismatch at site(s) {bad}"
        )
    z_check = psi.z[i_check]
    if z_check == 0:
        raise PreconditionError(
            "psi vanishes at i_check, so every added history would have zero amplitude"
        )
    q_norm = tuple((qf - psi.q[i_check]) % npr for qf in psi.q)
    state = InitialState.exact(psi.z, q_norm)
    t_def = ev.t
    ebar = complement(ev)
    prefixes = _prefixes_by_site(ebar)
    prefix_phases = [[path_phase(model, p) for p in lst] for lst in prefixes]

    m_start = 1
    while 4 * n * m_start < t_def:
        m_start += 1
    if m_start > m_max:
        raise LimitExceededError(
            f"defining time {t_def} needs m >= {m_start}, above the cap {m_max}"
        )
    divisible_seen = False
    for m in range(m_start, m_max + 1):
        t_mid = 4 * n * m
        s_t = phase_counts(ev, t_mid)
        for big_m in range(m + 1, big_m_max + 1):
            horizon = 4 * n * big_m
            n_half_t = n ** (2 * n * big_m)
            if any(
                (n_half_t * state.z[f]) % z_check != 0
                for f in range(n)
                if f != i_check
            ):
                continue
            divisible_seen = True
            scale = n ** (2 * n * (big_m - m))
            required = _zero_table(model)
            row_src = s_t.counts[i_check]
            for f in range(n):
                peak = max(row_src[f])
                for p in range(npr):
                    target = scale * (peak - row_src[f][p])
                    if f != i_check:
                        ratio = (n_half_t * state.z[f]) // z_check
                        target += (ratio if p != q_norm[f] else 0) + abs(ratio)
                    if target < 0:
                        raise RuntimeError("negative target count")
                    required[i_check][f][p] = target
            if not _fits(required, phase_counts(ebar, horizon)):
                continue
            mid = _mid_table(model, horizon - t_def - 2 * (n - 1))
            alloc = _allocate(model, required, prefixes, prefix_phases, mid)
            if alloc is None:
                continue
            superset = _add_counts(phase_counts(ev, horizon), required)
            mu = measure_table(superset, state)
            if not mu.is_zero:
                raise RuntimeError("constructed superset is not null under psi")
            return StymieCertificate(
                mode="initial",
                base=ev,
                m=m,
                horizon=horizon,
                required=_freeze(required),
                generators=alloc,
                superset_counts=superset,
                mu_exact=mu.exact,
                i_check=i_check,
                state=state,
                t_mid=t_mid,
                big_m=big_m,
            )
    if not divisible_seen:
        raise PreconditionError(
            f"z[{i_check}] never divides n^(T/2) z_f for any horizon up to M = {big_m_max}"
        )
    raise LimitExceededError(
        f"no certificate within m <= {m_max}, M <= {big_m_max}"
    )


# -- materialization and verification -----------------------------------------


def _middles(model: Model, j: int, f: int, steps: int, phase: int, count: int) -> np.ndarray:
    """First `count` paths j -> f over `steps` hops with the given phase, in
    lexicographic order of their free inner sites."""
    from . import _kernels as kernels

    n, npr = model.n, model.n_prime
    if count == 0:
        return np.empty((0, steps + 1), dtype=np.int64)
    if steps == 0:
        if j != f or phase != 0 or count > 1:
            raise RuntimeError("no zero-step middles with those constraints")
        return np.array([[j]], dtype=np.int64)
    if n ** (steps - 1) <= _MID_GRID_CAP:
        inner = kernels.expand_paths(np.array([[j]], dtype=np.int64), n, steps - 1)
        full = np.concatenate(
            [inner, np.full((inner.shape[0], 1), f, dtype=np.int64)], axis=1
        )
        diffs = full[:, :-1] - full[:, 1:]
        phases = (diffs * diffs).sum(axis=1) % npr
        chosen = full[phases == phase]
        if chosen.shape[0] < count:
            raise RuntimeError("middle phase class undersupplied")
        return chosen[:count]
    return _middles_dfs(model, j, f, steps, phase, count)


def _middles_dfs(model: Model, j: int, f: int, steps: int, phase: int, count: int) -> np.ndarray:
    n, npr = model.n, model.n_prime
    # ways[r][s][q]: paths from s to f in r hops with phase q
    ways = [[[0] * npr for _ in range(n)] for _ in range(steps + 1)]
    ways[0][f][0] = 1
    for r in range(1, steps + 1):
        for s in range(n):
            for g in range(n):
                d = ((s - g) ** 2) % npr
                for q, v in enumerate(ways[r - 1][g]):
                    if v:
                        ways[r][s][(q + d) % npr] += v
    out = np.empty((count, steps + 1), dtype=np.int64)
    found = 0
    prefix = [j]

    # lexicographic DFS, pruned by remaining-way counts
    def descend(site, depth, need):
        nonlocal found
        if depth == steps:
            out[found, :] = prefix
            found += 1
            return found >= count
        for g in range(n):
            d = ((site - g) ** 2) % npr
            rest = (need - d) % npr
            if ways[steps - depth - 1][g][rest] == 0:
                continue
            prefix.append(g)
            done = descend(g, depth + 1, rest)
            prefix.pop()
            if done:
                return True
        return False

    descend(j, 0, phase)
    if found < count:
        raise RuntimeError("middle phase class undersupplied")
    return out


def materialize_added_paths(
    cert: StymieCertificate, cap: int = MATERIALIZE_CAP_DEFAULT
) -> np.ndarray:
    """Explicit site sequences of the added event, one row per path."""
    total = cert.added_total()
    horizon = cert.horizon
    if total > cap:
        raise LimitExceededError(f"|G| = {total} exceeds the materialization cap {cap}")
    model = cert.model
    if total == 0:
        return np.empty((0, horizon + 1), dtype=np.int64)
    t_def = cert.base.t
    ebar = complement(cert.base)
    prefixes = _prefixes_by_site(ebar)
    steps = horizon - t_def - 2 * (model.n - 1)
    blocks = []
    for cell in cert.generators:
        for idx, k, take in cell.entries:
            pref = prefixes[cell.i][idx]
            q1 = path_phase(model, pref)
            q2 = (cell.p - q1 - 2 * k) % model.n_prime
            mids = _middles(model, pref[-1], cell.f, steps, q2, take)
            tail = zigzag_tail(model, cell.f, k)
            block = np.concatenate(
                [
                    np.tile(np.array(pref, dtype=np.int64), (take, 1)),
                    mids[:, 1:],
                    np.tile(np.array(tail[1:], dtype=np.int64), (take, 1)),
                ],
                axis=1,
            )
            blocks.append(block)
    return np.concatenate(blocks, axis=0)


def _required_for(cert: StymieCertificate):
    """Recompute the target counts of the added event from the base data."""
    model = cert.model
    n, npr = model.n, model.n_prime
    required = _zero_table(model)
    if cert.mode == "universal":
        t_def = cert.base.t
        if cert.horizon != t_def + 4 * n * cert.m:
            return None
        s_e = phase_counts(cert.base, t_def)
        scale = n ** (2 * n * cert.m)
        for i in range(n):
            for f in range(n):
                adm = model.admissible_phases(i, f)
                row = s_e.counts[i][f]
                peak = max(row[p] for p in adm)
                for p in adm:
                    required[i][f][p] = scale * (peak - row[p])
        return required
    if cert.horizon != 4 * n * cert.big_m or cert.t_mid != 4 * n * cert.m:
        return None
    if cert.t_mid < cert.base.t or cert.big_m <= cert.m:
        return None
    state = cert.state
    z_check = state.z[cert.i_check]
    n_half_t = n ** (2 * n * cert.big_m)
    s_t = phase_counts(cert.base, cert.t_mid)
    scale = n ** (2 * n * (cert.big_m - cert.m))
    row_src = s_t.counts[cert.i_check]
    for f in range(n):
        peak = max(row_src[f])
        for p in range(npr):
            target = scale * (peak - row_src[f][p])
            if f != cert.i_check:
                if (n_half_t * state.z[f]) % z_check != 0:
                    return None
                ratio = (n_half_t * state.z[f]) // z_check
                target += (ratio if p != state.q[f] else 0) + abs(ratio)
            required[cert.i_check][f][p] = target
    return required


def verify_certificate(
    cert: StymieCertificate, materialize_cap: int = MATERIALIZE_CAP_DEFAULT
) -> bool:
    """Re-derive a certificate's claims from its base data alone.

    Checks the preconditions, the target-count formula, feasibility against
    the complement's exact counts, the generator allocation's capacities, the
    exact nullity of the superset, and (when the added event is small enough)
    the materialized paths themselves.
    """
    model = cert.model
    n, npr = model.n, model.n_prime
    ev = canonical(cert.base)
    if ev != cert.base:
        return False
    starts = start_counts(ev)
    whole = n**ev.t
    if cert.mode == "universal":
        if ev.is_empty() or any(c == whole for c in starts):
            return False
    elif cert.mode == "initial":
        if n % 2 == 0 or cert.state is None or cert.i_check is None:
            return False
        if cert.state.mode != "exact" or cert.state.n != n:
            return False
        if not 0 <= cert.i_check < n or cert.state.z[cert.i_check] == 0:
            return False
        if cert.state.q[cert.i_check] != 0:
            return False
        if any((starts[i] == whole) != (i != cert.i_check) for i in range(n)):
            return False
    else:
        return False

    required = _required_for(cert)
    if required is None or _freeze(required) != cert.required:
        return False

    ebar = complement(ev)
    if not _fits(required, phase_counts(ebar, cert.horizon)):
        return False

    # generator allocation: valid references, within capacity, right totals
    prefixes = _prefixes_by_site(ebar)
    steps = cert.horizon - ev.t - 2 * (n - 1)
    if steps < 1:
        return False
    mid = _mid_table(model, steps)
    remaining = [[list(row) for row in plane] for plane in required]
    for cell in cert.generators:
        if not (0 <= cell.i < n and 0 <= cell.f < n and 0 <= cell.p < npr):
            return False
        seen = set()
        for idx, k, take in cell.entries:
            if take < 1 or not 0 <= k < n or not 0 <= idx < len(prefixes[cell.i]):
                return False
            if (idx, k) in seen:
                return False
            seen.add((idx, k))
            pref = prefixes[cell.i][idx]
            q2 = (cell.p - path_phase(model, pref) - 2 * k) % npr
            if take > mid.cell(pref[-1], cell.f, q2):
                return False
            remaining[cell.i][cell.f][cell.p] -= take
    if any(v != 0 for plane in remaining for row in plane for v in row):
        return False

    superset = _add_counts(phase_counts(ev, cert.horizon), required)
    if superset.counts != cert.superset_counts.counts:
        return False
    if cert.mode == "universal":
        for i in range(n):
            for f in range(n):
                if not superset.site_amplitude(i, f).is_zero():
                    return False
        mu = measure_table(superset, _uniform_state(model))
    else:
        mu = measure_table(superset, cert.state)
    if not (mu.is_zero and cert.mu_exact.is_zero()):
        return False

    total = cert.added_total()
    if 0 < total <= materialize_cap:
        paths = materialize_added_paths(cert, materialize_cap)
        if paths.shape != (total, cert.horizon + 1):
            return False
        if np.unique(paths, axis=0).shape[0] != total:
            return False
        ebar_set = set(ebar.paths)
        heads = {tuple(int(v) for v in row[: ev.t + 1]) for row in paths}
        if not heads <= ebar_set:
            return False
        from . import _kernels as kernels

        tallied = kernels.tally_phase_counts(paths, n, npr)
        for i in range(n):
            for f in range(n):
                for p in range(npr):
                    if int(tallied[i, f, p]) != required[i][f][p]:
                        return False
    return True
