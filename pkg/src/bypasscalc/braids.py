"""The oriented framed monotone braid of a list of braid moves, and its
writhe.

Each dividing circle contributes one strand, oriented by the parity of its
nesting depth seen from a base face. One full counterclockwise turn of a
moving strand around a stationary one contributes a pair of equal-sign
crossings totalling -2 * eps_moving * eps_stationary. The writhe is the sum
of signed crossings; the number of attachment triangles the motion is worth
is its negative.
"""

from __future__ import annotations

from typing import NamedTuple

from .dividing import DividingSet
from .moves import BraidMove, subtree_circles, validate_braid


class Crossing(NamedTuple):
    moving: str
    stationary: str
    sign: int


class MonotoneBraid(NamedTuple):
    orientations: dict[str, int]  # circle id -> +1 / -1
    events: tuple[Crossing, ...]


class HopfLedger(NamedTuple):
    writhe: int
    triangle_equivalent: int


def strand_orientations(ds: DividingSet, base: str) -> dict[str, int]:
    """eps(circle) = (-1)^(nesting depth from the base face)."""
    if base not in ds.faces:
        raise KeyError(f"unknown base face {base!r}")
    adj = ds.adjacency()
    eps: dict[str, int] = {}
    stack = [(base, 1)]
    seen = {base}
    while stack:
        f, sign = stack.pop()
        for c, g in adj[f]:
            if c not in eps:
                eps[c] = sign
                if g not in seen:
                    seen.add(g)
                    stack.append((g, -sign))
    return eps


def braid_of(ds: DividingSet, braids: list[BraidMove]) -> MonotoneBraid:
    """The monotone braid traced out by the moves, events in move order.

    Per unit winding of a cluster around a hole, every moving strand crosses
    every strand behind that hole twice, both crossings with the same sign:
    minus the orientation product for a counterclockwise turn.
    """
    events: list[Crossing] = []
    eps_all: dict[str, int] = {c: 1 for c in ds.circles}
    for braid in braids:
        root = validate_braid(ds, braid)
        eps = strand_orientations(ds, braid.host)
        eps_all.update(eps)
        movers = sorted(subtree_circles(ds, braid.host, root))
        for hole, w in braid.windings:
            if w == 0:
                continue
            behind = sorted(subtree_circles(ds, braid.host, hole))
            s = 1 if w > 0 else -1
            for _ in range(abs(w)):
                for i in movers:
                    for j in behind:
                        sign = -s * eps[i] * eps[j]
                        events.append(Crossing(i, j, sign))
                        events.append(Crossing(i, j, sign))
    return MonotoneBraid(eps_all, tuple(events))


def writhe(b: MonotoneBraid) -> int:
    return sum(e.sign for e in b.events)


def hopf_ledger(ds: DividingSet, braids: list[BraidMove]) -> HopfLedger:
    w = writhe(braid_of(ds, braids))
    return HopfLedger(w, -w)


def triangle_count(ds: DividingSet, braids: list[BraidMove]) -> int:
    """How many attachment triangles the motion is stably equivalent to."""
    return -writhe(braid_of(ds, braids))


def braid_report(ds: DividingSet, braids: list[BraidMove]) -> dict:
    b = braid_of(ds, braids)
    w = writhe(b)
    return {
        "writhe": w,
        "triangle_equivalent": -w,
        "events": [[e.moving, e.stationary, e.sign] for e in b.events],
    }
