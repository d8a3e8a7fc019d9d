"""Moves on dividing sets and sequences of them.

Three kinds of move: a bypass attachment (changes the state), a pure braid
(moves a cluster of circles around inside one face, fixing the state) and a
triangle mark (an atomic record of one full attachment triangle, used by the
normalizer ledger). A sequence carries its initial state and caches the trace
of states after each move; descriptors in a sequence always reference the ids
of the canonical state they are applied to.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .arcs import ArcSpec, InadmissibleArc
from .dividing import DividingSet
from .surgery import attach_bypass, attach_triangle


class MoveError(ValueError):
    """A move invalid at its state. Carries the position in the sequence."""

    def __init__(self, message: str, *, index: int | None = None, code: str = "invalid_move"):
        super().__init__(message)
        self.index = index
        self.code = code


class UnsupportedTransport(MoveError):
    def __init__(self, message: str, *, index: int | None = None):
        super().__init__(message, index=index, code="unsupported_transport")


@dataclass(frozen=True)
class BraidMove:
    """A motion of a cluster of circles inside one face.

    The cluster is the full sub-tree hanging off the host face through one of
    its boundary circles. Windings count signed turns around the other
    boundary circles (holes) of the host face; positive is counterclockwise.
    The crossing word records crossings with currently embedded arcs and is
    empty in every supported case.
    """

    host: str
    cluster: tuple[str, ...]
    windings: tuple[tuple[str, int], ...]
    crossings: tuple[str, ...] = ()

    def __init__(self, host, cluster, windings, crossings=()):
        object.__setattr__(self, "host", host)
        object.__setattr__(self, "cluster", tuple(sorted(cluster)))
        items = windings.items() if isinstance(windings, dict) else windings
        object.__setattr__(
            self, "windings", tuple(sorted((c, int(w)) for c, w in items))
        )
        object.__setattr__(self, "crossings", tuple(crossings))

    def winding_map(self) -> dict[str, int]:
        return dict(self.windings)

    def reversed(self) -> "BraidMove":
        return BraidMove(
            self.host,
            self.cluster,
            [(c, -w) for c, w in self.windings],
            self.crossings,
        )

    def to_json_obj(self) -> dict:
        return {
            "kind": "braid",
            "host": self.host,
            "cluster": list(self.cluster),
            "windings": {c: w for c, w in self.windings},
            "crossings": list(self.crossings),
        }


def subtree_circles(ds: DividingSet, host: str, root_circle: str) -> set[str]:
    """All circles of the sub-tree entered from host through root_circle."""
    adj = ds.adjacency()
    seen = {root_circle}
    stack = [next(f for f in ds.circles[root_circle] if f != host)]
    faces_seen = {host}
    while stack:
        f = stack.pop()
        if f in faces_seen:
            continue
        faces_seen.add(f)
        for c, g in adj[f]:
            if c not in seen:
                seen.add(c)
                stack.append(g)
    return seen


def validate_braid(ds: DividingSet, braid: BraidMove) -> str:
    """Check a braid move against a state; returns the cluster root circle."""
    if braid.host not in ds.faces:
        raise MoveError(f"braid host face {braid.host!r} not in the dividing set")
    boundary = {c for c, _ in ds.adjacency()[braid.host]}
    roots = [c for c in braid.cluster if c in boundary]
    if len(roots) != 1:
        raise MoveError(
            "braid cluster must hang off its host face through exactly one circle"
        )
    root = roots[0]
    want = subtree_circles(ds, braid.host, root)
    if set(braid.cluster) != want:
        raise MoveError(
            "braid cluster must be the full sub-tree behind its root circle"
        )
    holes = boundary - {root}
    for c, _ in braid.windings:
        if c not in holes:
            raise MoveError(f"braid winding references {c!r}, not a hole of the host face")
    return root


@dataclass(frozen=True)
class Move:
    kind: str  # bypass | braid | triangle
    arc: ArcSpec | None = None
    braid: BraidMove | None = None

    def __post_init__(self):
        if self.kind == "bypass" and self.arc is None:
            raise MoveError("bypass move needs an arc")
        if self.kind == "braid" and self.braid is None:
            raise MoveError("braid move needs braid data")
        if self.kind == "triangle" and self.arc is None:
            raise MoveError("triangle move needs an arc")
        if self.kind not in ("bypass", "braid", "triangle"):
            raise MoveError(f"unknown move kind {self.kind!r}")

    def to_json_obj(self) -> dict:
        if self.kind == "braid":
            return self.braid.to_json_obj()
        return {"kind": self.kind, "arc": self.arc.to_json_obj()}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Move":
        kind = obj.get("kind")
        if kind == "braid":
            return cls(
                "braid",
                braid=BraidMove(
                    obj["host"],
                    obj["cluster"],
                    obj.get("windings", {}),
                    obj.get("crossings", ()),
                ),
            )
        if kind in ("bypass", "triangle"):
            return cls(kind, arc=ArcSpec.from_json_obj(obj["arc"]))
        raise MoveError(f"unknown move kind {kind!r}")


def bypass(arc: ArcSpec) -> Move:
    return Move("bypass", arc=arc)


def braid_move(host: str, cluster, windings, crossings=()) -> Move:
    return Move("braid", braid=BraidMove(host, cluster, windings, crossings))


def triangle_mark(arc: ArcSpec) -> Move:
    return Move("triangle", arc=arc)


def apply_move(ds: DividingSet, move: Move) -> DividingSet:
    if move.kind == "bypass":
        return attach_bypass(ds, move.arc).ds
    if move.kind == "triangle":
        return attach_triangle(ds, move.arc).states[3]
    validate_braid(ds, move.braid)
    return ds


def apply_braid(ds: DividingSet, braid: BraidMove) -> DividingSet:
    """A braid move fixes the dividing set; this validates and returns it."""
    validate_braid(ds, braid)
    return ds


def transport_arc(arc: ArcSpec, braid: BraidMove, direction: str) -> ArcSpec:
    """Push an arc descriptor down past a braid move (or pull it up).

    At this abstraction level the braid's time-1 map is a homeomorphism of
    the pair (sphere, dividing set) fixing all ids, so the descriptor is
    unchanged whenever the arc stays clear of the moving corridor. A braid
    whose crossing word is nonempty moves through the arc in a pattern the
    winding encoding cannot express; that case fails loudly.
    """
    if direction not in ("up", "down"):
        raise MoveError(f"transport direction must be 'up' or 'down', not {direction!r}")
    if braid.crossings:
        raise UnsupportedTransport(
            "braid crossing word is nonempty; arc transport across a "
            "multi-crossing corridor is not supported"
        )
    return arc


@dataclass
class MoveSequence:
    initial: DividingSet
    moves: list[Move] = field(default_factory=list)
    _trace: list[DividingSet] | None = field(default=None, repr=False, compare=False)

    def trace(self) -> list[DividingSet]:
        """States before/after each move; trace[i] is the state move i sees."""
        if self._trace is None:
            out = [self.initial.relabeled()[0]]
            for i, mv in enumerate(self.moves):
                try:
                    out.append(apply_move(out[-1], mv))
                except (InadmissibleArc, MoveError) as exc:
                    raise MoveError(
                        f"move {i} invalid: {exc}",
                        index=i,
                        code=getattr(exc, "code", "invalid_move"),
                    ) from exc
            self._trace = out
        return self._trace

    def final(self) -> DividingSet:
        return self.trace()[-1]

    def complexity(self) -> int:
        # max circle count over the trace, triangle interiors included
        c = 0
        state = self.trace()[0]
        c = max(c, state.n_circles())
        for mv in self.moves:
            if mv.kind == "triangle":
                tri = attach_triangle(state, mv.arc)
                c = max(c, *(s.n_circles() for s in tri.states))
                state = tri.states[3]
            else:
                state = apply_move(state, mv)
                c = max(c, state.n_circles())
        return c

    def extended(self, *moves: Move) -> "MoveSequence":
        return MoveSequence(self.initial, [*self.moves, *moves])

    def to_json_obj(self) -> dict:
        return {
            "initial": self.initial.to_json_obj(),
            "moves": [m.to_json_obj() for m in self.moves],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2)

    @classmethod
    def from_json_obj(cls, obj: dict) -> "MoveSequence":
        return cls(
            DividingSet.from_json_obj(obj["initial"]),
            [Move.from_json_obj(m) for m in obj["moves"]],
        )

    @classmethod
    def from_json(cls, text: str) -> "MoveSequence":
        return cls.from_json_obj(json.loads(text))


def apply_sequence(seq: MoveSequence) -> list[DividingSet]:
    """The full state trace of a sequence; first invalid move reported with
    its index on MoveError."""
    return seq.trace()
