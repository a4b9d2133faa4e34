"""Time-finite events: finite unions of cylinder sets over the hopper's path
space, represented by the set of t-paths at a common time.

The canonical form stores the path set at the defining time, the least t at
which the event is a union of t-path cylinders.  Compaction works on the path
trie: whenever every sibling group (paths sharing their first t sites) is
complete, the whole level collapses one step.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import LimitExceededError, PreconditionError
from .hopper import Model, TPath

EVENT_T_CAP = 40
PATH_MATERIALIZE_CAP = 10**7


@dataclass(frozen=True)
class TimeFiniteEvent:
    """A set of distinct t-paths, all of length t+1, read as a union of cylinders."""

    model: Model
    t: int
    paths: tuple[TPath, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "paths", tuple(sorted(set(tuple(p) for p in self.paths)))
        )
        for p in self.paths:
            if len(p) != self.t + 1:
                raise PreconditionError(
                    f"path {p} has length {len(p)}, expected {self.t + 1}"
                )
            for s in p:
                self.model.check_site(s)

    def __len__(self) -> int:
        return len(self.paths)

    def is_empty(self) -> bool:
        return not self.paths

    def to_json(self) -> dict:
        return {"n": self.model.n, "t": self.t, "paths": [list(p) for p in self.paths]}

    @classmethod
    def from_json(cls, obj: dict) -> TimeFiniteEvent:
        ev = cls(Model(int(obj["n"])), int(obj["t"]), tuple(map(tuple, obj["paths"])))
        return canonical(ev)


def cylinder(model: Model, path: TPath) -> TimeFiniteEvent:
    """The event "the history agrees with `path` for its first len(path) sites"."""
    return TimeFiniteEvent(model, len(path) - 1, (tuple(path),))


def full_event(model: Model) -> TimeFiniteEvent:
    """The sure event, canonically the union of all single-site cylinders."""
    return TimeFiniteEvent(model, 0, tuple((i,) for i in range(model.n)))


def empty_event(model: Model) -> TimeFiniteEvent:
    return TimeFiniteEvent(model, 0, ())


def refine(e: TimeFiniteEvent, t_new: int, t_cap: int = EVENT_T_CAP) -> TimeFiniteEvent:
    """Re-express the same event with t-paths at a later time t_new."""
    if t_new < e.t:
        raise PreconditionError(f"cannot refine from t={e.t} down to t={t_new}")
    if t_new > t_cap:
        raise LimitExceededError(f"refinement to t={t_new} exceeds the cap {t_cap}")
    n = e.model.n
    if len(e.paths) * n ** (t_new - e.t) > PATH_MATERIALIZE_CAP:
        raise LimitExceededError("refinement would materialize too many paths")
    paths = e.paths
    for _ in range(t_new - e.t):
        paths = tuple(p + (j,) for p in paths for j in range(n))
    return TimeFiniteEvent(e.model, t_new, paths)


def canonical(e: TimeFiniteEvent) -> TimeFiniteEvent:
    """The event at its defining time (empty events sit at t=0 by convention)."""
    if e.is_empty():
        return TimeFiniteEvent(e.model, 0, ())
    n = e.model.n
    paths = set(e.paths)
    t = e.t
    while t > 0:
        groups: dict[TPath, set[int]] = {}
        for p in paths:
            groups.setdefault(p[:-1], set()).add(p[-1])
        if any(len(v) != n for v in groups.values()):
            break
        paths = set(groups.keys())
        t -= 1
    return TimeFiniteEvent(e.model, t, tuple(sorted(paths)))


def defining_time(e: TimeFiniteEvent) -> tuple[int, TimeFiniteEvent]:
    c = canonical(e)
    return c.t, c


def _common_time(a: TimeFiniteEvent, b: TimeFiniteEvent) -> tuple[TimeFiniteEvent, TimeFiniteEvent]:
    if a.model != b.model:
        raise PreconditionError("events belong to different models")
    t = max(a.t, b.t)
    return refine(a, t), refine(b, t)


def union(a: TimeFiniteEvent, b: TimeFiniteEvent) -> TimeFiniteEvent:
    ra, rb = _common_time(a, b)
    return canonical(TimeFiniteEvent(a.model, ra.t, ra.paths + rb.paths))


def intersect(a: TimeFiniteEvent, b: TimeFiniteEvent) -> TimeFiniteEvent:
    ra, rb = _common_time(a, b)
    keep = set(ra.paths) & set(rb.paths)
    return canonical(TimeFiniteEvent(a.model, ra.t, tuple(keep)))


def complement(e: TimeFiniteEvent) -> TimeFiniteEvent:
    omega = refine(full_event(e.model), e.t)
    keep = set(omega.paths) - set(e.paths)
    return canonical(TimeFiniteEvent(e.model, e.t, tuple(keep)))


def is_subset(a: TimeFiniteEvent, b: TimeFiniteEvent) -> bool:
    ra, rb = _common_time(a, b)
    return set(ra.paths) <= set(rb.paths)


def same_event(a: TimeFiniteEvent, b: TimeFiniteEvent) -> bool:
    return canonical(a) == canonical(b)


def restrict_final(e: TimeFiniteEvent, f: int) -> tuple[TPath, ...]:
    """The t-paths of the event ending at site f."""
    e.model.check_site(f)
    return tuple(p for p in e.paths if p[-1] == f)


def start_counts(e: TimeFiniteEvent) -> list[int]:
    """Number of the event's t-paths starting at each site (at its own t)."""
    out = [0] * e.model.n
    for p in e.paths:
        out[p[0]] += 1
    return out


def initial_sites(e: TimeFiniteEvent) -> set[int]:
    """Sites i with Cyl(i) entirely inside the event."""
    c = canonical(e)
    counts = start_counts(c)
    whole = c.model.n**c.t
    return {i for i, v in enumerate(counts) if v == whole}
