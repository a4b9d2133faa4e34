"""Multiplicative co-events over a truncated history space.

With the universe cut off at t_max, the history space is the finite set of
t_max-paths and events are its subsets, held as bitmasks.  A multiplicative
co-event is determined by its support S: it affirms exactly the events
containing S.  Preclusivity (denying every null event) is decided against the
antichain of maximal null events; minimal preclusive supports are the minimal
hitting sets of the complements of those maximal null events.

Nullity is exact for classical integer-weight fixtures and for exact quantum
states, where each history contributes an integer vector per final site and a
subset is null iff every final-site block sums to zero modulo the cyclotomic
polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels as kernels
from .cyclotomic import cyclotomic_poly, reduce_mod_cyclotomic
from .errors import LimitExceededError, PreconditionError
from .events import TimeFiniteEvent, refine
from .hopper import InitialState, Model
from .measure import EPS_NULL, MeasureResult, PhaseCountTable, measure_table

SYSTEM_PATH_CAP = 4096
LATTICE_CAP_DEFAULT = 16
PER_SITE_SEARCH_CAP = 1 << 18


@lru_cache(maxsize=None)
def _reduction_matrix(order: int) -> np.ndarray:
    """Row j is x^j reduced mod the order-th cyclotomic polynomial."""
    deg = len(cyclotomic_poly(order)) - 1
    rows = []
    for j in range(order):
        unit = [0] * order
        unit[j] = 1
        rows.append(reduce_mod_cyclotomic(tuple(unit), order))
    out = np.array(rows, dtype=np.int64)
    assert out.shape == (order, deg)
    return out


@dataclass(frozen=True)
class Coevent:
    """A multiplicative co-event, identified by its non-empty support."""

    support: frozenset[int]

    def __post_init__(self):
        if not self.support:
            raise PreconditionError("a co-event needs a non-empty support")

    def mask(self) -> int:
        m = 0
        for r in self.support:
            m |= 1 << r
        return m


def evaluate(phi: Coevent, event_mask: int) -> int:
    """1 iff the support lies inside the event; multiplicative by construction."""
    return 1 if phi.mask() & ~event_mask == 0 else 0


class TruncatedSystem:
    """History space of all t_max-paths plus a measure oracle.

    The oracle is either the hopper's quantum measure for a fixed initial
    state, or a classical fixture: non-negative integer weights with
    D(A, B) = P(A intersect B).
    """

    def __init__(
        self,
        model: Model,
        t_max: int,
        psi: InitialState | None = None,
        weights=None,
        lattice_cap: int = LATTICE_CAP_DEFAULT,
        eps_null: float = EPS_NULL,
    ):
        if (psi is None) == (weights is None):
            raise PreconditionError("provide exactly one of psi or weights")
        self.model = model
        self.t_max = t_max
        self.lattice_cap = lattice_cap
        self.eps_null = eps_null
        size = model.n ** (t_max + 1)
        if size > SYSTEM_PATH_CAP:
            raise LimitExceededError(
                f"|Omega_{t_max}| = {size} exceeds the system cap {SYSTEM_PATH_CAP}"
            )
        base = np.array([[i] for i in range(model.n)], dtype=np.int64)
        self.paths = kernels.expand_paths(base, model.n, t_max)
        self.kind = "classical" if weights is not None else "quantum"
        self.psi = psi
        if weights is not None:
            weights = tuple(int(w) for w in weights)
            if len(weights) != size or any(w < 0 for w in weights):
                raise PreconditionError(
                    f"need {size} non-negative integer weights, got {weights!r}"
                )
            self.weights = weights
        else:
            psi.check_model(model)
            self.weights = None
        self.exact = self.kind == "classical" or psi.mode == "exact"
        self._contrib = self._build_contrib()
        self._null_bitmap_cache = None
        self._maximal_cache = None

    @property
    def size(self) -> int:
        return self.paths.shape[0]

    # -- per-history contributions ----------------------------------------

    def _final_sites(self) -> np.ndarray:
        return self.paths[:, -1]

    def _phases(self) -> np.ndarray:
        diffs = self.paths[:, :-1] - self.paths[:, 1:]
        if diffs.shape[1] == 0:
            return np.zeros(self.size, dtype=np.int64)
        return (diffs * diffs).sum(axis=1) % self.model.n_prime

    def _build_contrib(self):
        """Rows: per history, a vector whose subset sums decide nullity."""
        if self.kind == "classical":
            return np.array(self.weights, dtype=np.int64)[:, None]
        n, npr = self.model.n, self.model.n_prime
        phases = self._phases()
        finals = self._final_sites()
        if self.exact:
            red = _reduction_matrix(npr)
            d = red.shape[1]
            out = np.zeros((self.size, n * d), dtype=np.int64)
            for r in range(self.size):
                i = int(self.paths[r, 0])
                if self.psi.z[i] == 0:
                    continue
                slot = (self.psi.q[i] + int(phases[r])) % npr
                f = int(finals[r])
                out[r, f * d : (f + 1) * d] = self.psi.z[i] * red[slot]
            return out
        amps = np.array(
            [self.psi.psi[int(self.paths[r, 0])] for r in range(self.size)]
        )
        unit = np.exp(2j * np.pi * phases / npr)
        scale = self.model.n ** (-self.t_max / 2)
        out = np.zeros((self.size, n), dtype=complex)
        out[np.arange(self.size), finals] = amps * unit * scale
        return out

    def _rows_zero(self, sums: np.ndarray) -> np.ndarray:
        if self.exact:
            return (sums == 0).all(axis=1)
        return (np.abs(sums) ** 2).sum(axis=1) < self.eps_null

    # -- exhaustive null structure -----------------------------------------

    def null_bitmap(self) -> np.ndarray:
        """null_bitmap[mask] says whether the event `mask` is null."""
        if self._null_bitmap_cache is None:
            if self.size > self.lattice_cap:
                raise LimitExceededError(
                    f"|Omega| = {self.size} exceeds the lattice cap {self.lattice_cap}"
                )
            if self.exact:
                sums = kernels.subset_sums(self._contrib)
            else:
                sums = np.zeros((1 << self.size, self._contrib.shape[1]), dtype=complex)
                stride = 1
                for b in range(self.size):
                    sums[stride : 2 * stride] = sums[:stride] + self._contrib[b]
                    stride *= 2
            self._null_bitmap_cache = self._rows_zero(sums)
        return self._null_bitmap_cache

    def maximal_null_masks(self) -> list[int]:
        """The antichain of maximal null events, as bitmasks."""
        if self._maximal_cache is None:
            null = self.null_bitmap()
            idx = np.arange(1 << self.size, dtype=np.int64)
            dominated = np.zeros_like(null)
            for b in range(self.size):
                bit = 1 << b
                absent = (idx & bit) == 0
                dominated |= absent & null[idx | bit]
            self._maximal_cache = [int(s) for s in np.nonzero(null & ~dominated)[0]]
        return self._maximal_cache

    def is_null_mask(self, mask: int) -> bool:
        rows = [r for r in range(self.size) if mask >> r & 1]
        total = self._contrib[rows].sum(axis=0) if rows else self._contrib[:0].sum(axis=0)
        return bool(self._rows_zero(total[None, :])[0])

    # -- bridges ------------------------------------------------------------

    def event_mask(self, event: TimeFiniteEvent) -> int:
        if event.model != self.model:
            raise PreconditionError("event belongs to a different model")
        ref = refine(event, self.t_max)
        n = self.model.n
        mask = 0
        for p in ref.paths:
            rank = 0
            for s in p:
                rank = rank * n + s
            mask |= 1 << rank
        return mask

    def mask_paths(self, mask: int) -> list[tuple[int, ...]]:
        return [
            tuple(int(v) for v in self.paths[r])
            for r in range(self.size)
            if mask >> r & 1
        ]

    def mask_measure(self, mask: int) -> MeasureResult:
        """Measure of an event-as-mask through the measure module."""
        if self.kind == "classical":
            raise PreconditionError("classical fixtures have no quantum measure")
        rows = [r for r in range(self.size) if mask >> r & 1]
        n, npr = self.model.n, self.model.n_prime
        counts = [[[0] * npr for _ in range(n)] for _ in range(n)]
        phases = self._phases()
        for r in rows:
            counts[self.paths[r, 0]][self.paths[r, -1]][int(phases[r])] += 1
        table = PhaseCountTable.from_lists(self.model, self.t_max, counts)
        return measure_table(table, self.psi, eps_null=self.eps_null)


def quantum_system(model: Model, t_max: int, psi: InitialState, **kw) -> TruncatedSystem:
    return TruncatedSystem(model, t_max, psi=psi, **kw)


def classical_system(model: Model, t_max: int, weights, **kw) -> TruncatedSystem:
    return TruncatedSystem(model, t_max, weights=weights, **kw)


# -- preclusivity ---------------------------------------------------------------


def is_preclusive(phi: Coevent, sys: TruncatedSystem) -> bool:
    """A co-event is preclusive iff its support sits inside no null event."""
    s = phi.mask()
    return all(s & ~m for m in sys.maximal_null_masks())


def minimal_preclusive_supports(sys: TruncatedSystem) -> list[Coevent]:
    """All inclusion-minimal preclusive supports, smallest cardinality first."""
    size = sys.size
    idx = np.arange(1 << size, dtype=np.int64)
    covered = np.zeros(1 << size, dtype=bool)
    for m in sys.maximal_null_masks():
        covered |= (idx & ~np.int64(m)) == 0
    preclusive = ~covered
    preclusive[0] = False
    shrinkable = np.zeros_like(preclusive)
    for b in range(size):
        bit = 1 << b
        has_b = (idx & bit) != 0
        shrinkable |= has_b & preclusive[idx & ~bit]
    minimal = np.nonzero(preclusive & ~shrinkable)[0]
    supports = [
        Coevent(frozenset(r for r in range(size) if int(s) >> r & 1)) for s in minimal
    ]
    return sorted(supports, key=lambda c: (len(c.support), c.mask()))


# -- stymie queries ---------------------------------------------------------------


def is_stymied(
    event_mask: int, sys: TruncatedSystem, per_site_cap: int = PER_SITE_SEARCH_CAP
) -> tuple[bool, int | None]:
    """Does some null event within the truncation contain the event?

    Quantum measures factor over final sites, so a null superset exists iff
    for every final site the event's amplitude sum can be cancelled by some
    subset of the remaining histories ending there.  Returns the verdict and
    a witness mask.
    """
    if event_mask >> sys.size:
        raise PreconditionError("event mask addresses histories outside the space")
    if sys.kind == "classical":
        zero_all = 0
        for r in range(sys.size):
            if sys.weights[r] == 0:
                zero_all |= 1 << r
        if event_mask & ~zero_all == 0:
            return True, zero_all
        return False, None
    finals = sys._final_sites()
    witness = event_mask
    for f in range(sys.model.n):
        members = [r for r in range(sys.size) if finals[r] == f]
        chosen_rows = [r for r in members if event_mask >> r & 1]
        others = [r for r in members if not event_mask >> r & 1]
        base = sys._contrib[chosen_rows].sum(axis=0)
        if bool(sys._rows_zero(base[None, :])[0]):
            continue
        if len(others) > per_site_cap.bit_length() - 1:
            raise LimitExceededError(
                f"{len(others)} candidate histories at final site {f} exceed the search cap"
            )
        if sys.exact:
            sums = kernels.subset_sums(sys._contrib[others])
        else:
            sums = np.zeros((1 << len(others), sys._contrib.shape[1]), dtype=complex)
            stride = 1
            for b, r in enumerate(others):
                sums[stride : 2 * stride] = sums[:stride] + sys._contrib[r]
                stride *= 2
        hits = np.nonzero(sys._rows_zero(sums + base))[0]
        if hits.size == 0:
            return False, None
        pick = int(hits[0])
        for b, r in enumerate(others):
            if pick >> b & 1:
                witness |= 1 << r
    return True, witness
