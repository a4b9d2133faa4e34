"""Bundled example events: the canonical exactly-null demonstrations for the
2-, 5- and 3-site hoppers, plus a 2-site stymie chain, with the matching
states."""

from __future__ import annotations

from .events import TimeFiniteEvent, canonical, cylinder, same_event, union
from .hopper import InitialState, Model


def event_a() -> TimeFiniteEvent:
    """2-site: two 2-paths whose phases differ by half a turn; null for every state."""
    return canonical(TimeFiniteEvent(Model(2), 2, ((0, 0, 0), (0, 1, 0))))


def event_b() -> TimeFiniteEvent:
    """5-site: five 4-paths to the same endpoint, one per phase class."""
    return canonical(
        TimeFiniteEvent(
            Model(5),
            4,
            (
                (0, 1, 2, 0, 3),
                (0, 0, 1, 0, 3),
                (0, 0, 2, 0, 3),
                (0, 0, 1, 2, 3),
                (0, 0, 0, 0, 3),
            ),
        )
    )


def event_c() -> TimeFiniteEvent:
    """3-site: null only when psi_0 = omega * psi_1."""
    return canonical(TimeFiniteEvent(Model(3), 2, ((0, 0, 0), (0, 1, 0), (1, 2, 0))))


def state_c() -> InitialState:
    return InitialState.exact((1, 1, 0), (1, 0, 0))


def event_e() -> TimeFiniteEvent:
    """2-site chain event with defining time 3; null for psi = (1, 0) and
    universally; stymies its past and its extensions."""
    m = Model(2)
    return union(
        union(cylinder(m, (0, 0, 1)), cylinder(m, (0, 0, 0, 0))),
        cylinder(m, (0, 1, 0, 1)),
    )


def state_e() -> InitialState:
    return InitialState.exact((1, 0), (0, 0))


def all_fixtures() -> dict[str, TimeFiniteEvent]:
    return {"A": event_a(), "B": event_b(), "C": event_c(), "E": event_e()}


def match_fixture(event: TimeFiniteEvent) -> str | None:
    """Label of the bundled event this one equals, if any."""
    for name, fx in all_fixtures().items():
        if event.model == fx.model and same_event(event, fx):
            return name
    return None
