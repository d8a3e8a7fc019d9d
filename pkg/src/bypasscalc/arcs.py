"""Bypass attachment arcs as combinatorial descriptors.

An admissible arc crosses the dividing set three times: two endpoints and one
transverse middle crossing. Its combinatorial descriptor records

- crossings: the three crossed circles in arc order,
- faces: the two faces hosting the two sub-arcs (the sides of the middle
  circle),
- wiring: how the six local circle stubs at the crossing points close up
  along the circles (a perfect matching of u1,d1,u2,d2,u3,d3), where u is the
  stub counterclockwise-next after the arc at each crossing,
- splits: when a sub-arc has both ends on one circle it separates its host
  face; each such entry says which hanging circles of that face lie on the
  u side and which on the d side.

The descriptor determines the configuration up to homeomorphism of the
sphere; embed_arc realizes it as a planar map and validates admissibility.
"""

from __future__ import annotations

import itertools
import json
from typing import Iterable

from .dividing import MINUS, PLUS, DividingSet
from .planarmap import PlanarMap, edge_of, twin

STUBS = ("u1", "d1", "u2", "d2", "u3", "d3")

# surgery template: how the six stubs are reconnected by an attachment
TEMPLATE_PAIRS = (("u1", "d3"), ("u2", "u3"), ("d1", "d2"))


class InadmissibleArc(ValueError):
    """The descriptor does not embed in the given dividing set."""

    def __init__(self, reason: str, code: str = "inadmissible_arc"):
        super().__init__(reason)
        self.reason = reason
        self.code = code


class ArcSpec:
    """Immutable arc descriptor; see module docstring for the format."""

    __slots__ = ("crossings", "faces", "wiring", "splits")

    def __init__(
        self,
        crossings: tuple[str, str, str],
        faces: tuple[str, str],
        wiring: Iterable[tuple[str, str]],
        splits: Iterable[dict] = (),
    ):
        self.crossings = tuple(crossings)
        self.faces = tuple(faces)
        self.wiring = tuple(sorted(tuple(sorted(p)) for p in wiring))
        norm = []
        for s in splits:
            norm.append(
                {
                    "arc": int(s["arc"]),
                    "side_u": tuple(sorted(s["side_u"])),
                    "side_d": tuple(sorted(s["side_d"])),
                }
            )
        norm.sort(key=lambda s: s["arc"])
        self.splits = tuple(norm)
        if len(self.crossings) != 3 or len(self.faces) != 2:
            raise InadmissibleArc("descriptor needs 3 crossings and 2 faces")
        flat = [s for p in self.wiring for s in p]
        if sorted(flat) != sorted(STUBS):
            raise InadmissibleArc("wiring must be a perfect matching of the six stubs")

    def key(self) -> tuple:
        return (
            self.crossings,
            self.faces,
            self.wiring,
            tuple((s["arc"], s["side_u"], s["side_d"]) for s in self.splits),
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, ArcSpec) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def to_json_obj(self) -> dict:
        return {
            "crossings": list(self.crossings),
            "faces": list(self.faces),
            "wiring": [list(p) for p in self.wiring],
            "splits": [
                {
                    "arc": s["arc"],
                    "side_u": list(s["side_u"]),
                    "side_d": list(s["side_d"]),
                }
                for s in self.splits
            ],
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "ArcSpec":
        try:
            return cls(
                tuple(obj["crossings"]),
                tuple(obj["faces"]),
                [tuple(p) for p in obj["wiring"]],
                obj.get("splits", ()),
            )
        except (KeyError, TypeError) as exc:
            raise InadmissibleArc(f"malformed arc descriptor: {exc}") from exc

    def __repr__(self) -> str:  # pragma: no cover
        return f"ArcSpec({json.dumps(self.to_json_obj())})"


def _stub_circle(spec: ArcSpec, stub: str) -> str:
    return spec.crossings[int(stub[1]) - 1]


class Configuration:
    """A dividing set with embedded arcs, realized as a planar map.

    map faces are the fine regions of the curve system; face_of labels every
    dart with its dividing-set face, face_sign gives the region signs, and
    hang places each unmarked circle (with its whole subtree) into a fine
    region via a representative dart.
    """

    __slots__ = ("map", "arcs", "face_of", "face_sign", "hang", "hang_trees")

    def __init__(self, pmap: PlanarMap, arcs, face_of, face_sign, hang, hang_trees):
        self.map = pmap
        self.arcs: dict[str, tuple[int, int]] = arcs
        self.face_of: dict[int, str] = face_of
        self.face_sign: dict[str, int] = face_sign
        self.hang: dict[str, int] = hang
        self.hang_trees: dict[str, dict] = hang_trees

    def copy(self) -> "Configuration":
        return Configuration(
            self.map.copy(),
            dict(self.arcs),
            dict(self.face_of),
            dict(self.face_sign),
            dict(self.hang),
            self.hang_trees,
        )


def _hang_tree(ds: DividingSet, root_circle: str, host_face: str) -> dict:
    """The branch of the dividing set hanging below root_circle, as plain data."""
    a, b = ds.circles[root_circle]
    inner = b if host_face == a else a
    circles = ds.subtree_circles(root_circle, host_face) - {root_circle}
    faces = {inner: ds.faces[inner]}
    keep_circles = {}
    for c in circles:
        x, y = ds.circles[c]
        keep_circles[c] = (x, y)
        faces[x] = ds.faces[x]
        faces[y] = ds.faces[y]
    return {"root": root_circle, "inner": inner, "faces": faces, "circles": keep_circles}


def embed_arc(ds: DividingSet, spec: ArcSpec, arc_name: str = "a0") -> Configuration:
    """Realize a descriptor on a dividing set; raises InadmissibleArc."""
    c1, c2, c3 = spec.crossings
    f1, f2 = spec.faces
    for c in (c1, c2, c3):
        if c not in ds.circles:
            raise InadmissibleArc(f"unknown circle {c!r}")
    for f in (f1, f2):
        if f not in ds.faces:
            raise InadmissibleArc(f"unknown face {f!r}")
    if set(ds.circles[c2]) != {f1, f2}:
        raise InadmissibleArc("faces must be the two sides of the middle circle")
    if f1 not in ds.circles[c1]:
        raise InadmissibleArc("first circle does not bound the first face")
    if f2 not in ds.circles[c3]:
        raise InadmissibleArc("third circle does not bound the second face")
    for s, t in spec.wiring:
        if _stub_circle(spec, s) != _stub_circle(spec, t):
            raise InadmissibleArc(f"wiring pair {s}-{t} joins different circles")
    # each crossed circle must close up into a single curve
    for circ in set(spec.crossings):
        pts = [i for i in (1, 2, 3) if spec.crossings[i - 1] == circ]
        nxt = {}
        for s, t in spec.wiring:
            if _stub_circle(spec, s) == circ:
                nxt[s] = t
                nxt[t] = s
        # walk alternating wiring pairs and pass-through at crossing points
        start = f"u{pts[0]}"
        seen = set()
        s = start
        while s not in seen:
            seen.add(s)
            t = nxt[s]
            seen.add(t)
            s = ("d" if t[0] == "u" else "u") + t[1]
        if len(seen) != 2 * len(pts):
            raise InadmissibleArc(f"circle {circ!r} does not stay connected")

    m = PlanarMap()
    for v in ("p1", "p2", "p3"):
        m.add_vertex(v)
    e1 = m.add_edge("p1", "p2", "arc", label=arc_name)
    e2 = m.add_edge("p2", "p3", "arc", label=arc_name)
    A1, A2 = 2 * e1, 2 * e2
    stub_dart: dict[str, int] = {}
    for s, t in spec.wiring:
        e = m.add_edge(
            f"p{s[1]}", f"p{t[1]}", "circle", label=_stub_circle(spec, s)
        )
        stub_dart[s] = 2 * e
        stub_dart[t] = 2 * e + 1
    # impose the local rotations of the standard frame (ccw)
    m.rot["p1"] = [A1, stub_dart["u1"], stub_dart["d1"]]
    m.rot["p2"] = [A2, stub_dart["u2"], twin(A1), stub_dart["d2"]]
    m.rot["p3"] = [stub_dart["u3"], twin(A2), stub_dart["d3"]]
    m._faces = None
    try:
        m.check_sphere()
    except Exception as exc:
        raise InadmissibleArc(f"wiring does not embed in the sphere: {exc}") from exc
    faces = m.faces()
    if len(faces) != 4:
        raise InadmissibleArc("embedded arc must have four local regions")
    fidx = m.face_of_dart()

    # propagate dividing-set faces to the fine regions
    assign: dict[int, str] = {}

    def put(face_idx: int, label: str) -> None:
        if assign.get(face_idx, label) != label:
            raise InadmissibleArc("inconsistent region labeling")
        assign[face_idx] = label

    put(fidx[A1], f1)
    put(fidx[twin(A1)], f1)
    put(fidx[A2], f2)
    put(fidx[twin(A2)], f2)
    for _ in range(6):
        changed = False
        for e, kind in m.kind.items():
            if kind != "circle":
                continue
            circ = m.label[e]
            a, b = ds.circles[circ]
            s0, s1 = fidx[2 * e], fidx[2 * e + 1]
            for x, y in ((s0, s1), (s1, s0)):
                if x in assign and y not in assign:
                    other = b if assign[x] == a else a if assign[x] == b else None
                    if other is None:
                        raise InadmissibleArc(
                            f"region labeled {assign[x]!r} not a side of {circ!r}"
                        )
                    put(y, other)
                    changed = True
                elif x in assign and y in assign:
                    if {assign[x], assign[y]} != {a, b}:
                        raise InadmissibleArc(f"sides of circle {circ!r} mislabeled")
        if not changed:
            break
    if len(assign) != 4:
        raise InadmissibleArc("could not label all local regions")

    face_of = {d: assign[fidx[d]] for d in fidx}
    face_sign = dict(ds.faces)

    # hanging circles: every face label, its adjacent unmarked circles
    marked = set(spec.crossings)
    need = {1: c1 == c2, 2: c2 == c3}
    split_by_arc = {s["arc"]: s for s in spec.splits}
    if set(split_by_arc) != {k for k, v in need.items() if v}:
        raise InadmissibleArc("splits must be given exactly for separating sub-arcs")
    hang: dict[str, int] = {}
    hang_trees: dict[str, dict] = {}
    regions_by_label: dict[str, list[int]] = {}
    for i, cyc in enumerate(faces):
        regions_by_label.setdefault(assign[i], []).append(i)
    # representatives must be circle darts: they survive later surgeries
    rep = {
        i: next(d for d in cyc if m.kind[edge_of(d)] == "circle")
        for i, cyc in enumerate(faces)
    }

    labels_seen = set(assign.values())
    for label in ds.faces:
        roots = [c for c, _ in ds.adjacency()[label] if c not in marked]
        # drop duplicates from multi-adjacency (cannot happen on a tree)
        if not roots:
            continue
        if label not in labels_seen:
            # face untouched by the arc: hangs stay with their face; the
            # fine map does not see it, record no placement
            continue
        regions = regions_by_label[label]
        if len(regions) == 1:
            for h in roots:
                hang[h] = rep[regions[0]]
                hang_trees[h] = _hang_tree(ds, h, label)
        else:
            arc_no = 1 if label == f1 else 2
            if not need.get(arc_no):
                raise InadmissibleArc(f"face {label!r} unexpectedly split")
            entry = split_by_arc[arc_no]
            a_dart = A1 if arc_no == 1 else A2
            side_u_face, side_d_face = fidx[a_dart], fidx[twin(a_dart)]
            listed = set(entry["side_u"]) | set(entry["side_d"])
            if listed != set(roots) or set(entry["side_u"]) & set(entry["side_d"]):
                raise InadmissibleArc(
                    f"split for sub-arc {arc_no} must partition the hanging "
                    f"circles of face {label!r}"
                )
            for h in entry["side_u"]:
                hang[h] = rep[side_u_face]
                hang_trees[h] = _hang_tree(ds, h, label)
            for h in entry["side_d"]:
                hang[h] = rep[side_d_face]
                hang_trees[h] = _hang_tree(ds, h, label)
    # faces not represented in the local map: their hangs re-attach at collapse
    # time through untouched circles; record them against marked-face regions
    # is unnecessary because every ds face is adjacent to a marked circle or
    # lives inside some hanging subtree already captured above.
    for label in labels_seen:
        roots = [c for c, _ in ds.adjacency()[label] if c not in marked]
        missing = [h for h in roots if h not in hang]
        if missing:
            raise InadmissibleArc(f"unplaced hanging circles {missing!r}")

    return Configuration(
        m,
        {arc_name: (A1, A2)},
        face_of,
        face_sign,
        hang,
        hang_trees,
    )


# -- classification ---------------------------------------------------------


def predicted_component_delta(spec: ArcSpec) -> int:
    """Change in circle count under attachment, from the wiring alone."""
    mate = {}
    for s, t in spec.wiring:
        mate[s] = t
        mate[t] = s
    tmpl = {}
    for s, t in TEMPLATE_PAIRS:
        tmpl[s] = t
        tmpl[t] = s
    seen: set[str] = set()
    cycles = 0
    for s in STUBS:
        if s in seen:
            continue
        cycles += 1
        x = s
        while x not in seen:
            seen.add(x)
            y = mate[x]
            seen.add(y)
            x = tmpl[y]
    return cycles - len(set(spec.crossings))


def classify_arc(ds: DividingSet, spec: ArcSpec) -> dict:
    """Type and degree data of an admissible arc. Embeds (and so validates)."""
    embed_arc(ds, spec)
    delta = predicted_component_delta(spec)
    distinct = len(set(spec.crossings))
    if distinct == 1 and delta == 2:
        kind = "I"
    elif distinct == 1 and delta == 0:
        kind = "II"
    elif distinct == 2 and delta == 0:
        kind = "III"
    elif distinct == 3 and delta == -2:
        kind = "IV"
    else:  # pragma: no cover - excluded by the surgery calculus
        raise InadmissibleArc(
            f"impossible type data: {distinct} circles, delta {delta}",
            code="internal_inconsistency",
        )
    bare = all(not s["side_u"] and not s["side_d"] for s in spec.splits)
    return {
        "type": kind,
        "delta": delta,
        "is_trivial": kind == "II" and bare,
        "is_overtwisted": kind == "I" and bare,
    }


# -- canonical codes and enumeration ---------------------------------------


def _face_annotations(ds: DividingSet, config: Configuration) -> dict[int, tuple]:
    fidx = config.map.face_of_dart()
    faces = config.map.faces()
    hang_codes: dict[int, list] = {i: [] for i in range(len(faces))}
    for h, d in config.hang.items():
        tree = config.hang_trees[h]
        code = _subtree_code(tree)
        hang_codes[fidx[d]].append(code)
    ann = {}
    for i, cyc in enumerate(faces):
        label = config.face_of[cyc[0]]
        ann[i] = (config.face_sign[label], tuple(sorted(hang_codes[i])))
    return {d: ann[fidx[d]] for d in fidx}


def _subtree_code(tree: dict) -> str:
    adj: dict[str, list[tuple[str, str]]] = {f: [] for f in tree["faces"]}
    for c, (a, b) in tree["circles"].items():
        adj[a].append((c, b))
        adj[b].append((c, a))

    def code(face: str, parent: str | None) -> tuple:
        kids = sorted(code(g, face) for _, g in adj[face] if g != parent)
        return (tree["faces"][face], tuple(kids))

    return repr(code(tree["inner"], None))


def arc_code(ds: DividingSet, spec: ArcSpec) -> bytes:
    """Isomorphism invariant of the configuration (dividing set plus arc)."""
    config = embed_arc(ds, spec)
    ann = _face_annotations(ds, config)
    (A1, A2) = next(iter(config.arcs.values()))
    fwd = config.map.traversal_code(A1, extra=lambda d: ann[d])
    rev = config.map.traversal_code(twin(A2), extra=lambda d: ann[d])
    import hashlib

    return hashlib.sha256(repr(min(fwd, rev)).encode()).digest()


def _matchings(items: tuple[str, ...]):
    if not items:
        yield ()
        return
    first = items[0]
    for i in range(1, len(items)):
        rest = items[1:i] + items[i + 1 :]
        for sub in _matchings(rest):
            yield ((first, items[i]),) + sub


def _subsets(items: list[str]):
    for r in range(len(items) + 1):
        for combo in itertools.combinations(items, r):
            yield set(combo)


def enumerate_arcs(ds: DividingSet) -> list[ArcSpec]:
    """All admissible arcs on the dividing set, one per configuration class,
    deterministically ordered."""
    seen: dict[bytes, ArcSpec] = {}
    adj = ds.adjacency()
    face_circles = {f: [c for c, _ in adj[f]] for f in ds.faces}
    for c2 in sorted(ds.circles):
        sides = ds.circles[c2]
        for f1, f2 in (sides, sides[::-1]):
            for c1 in face_circles[f1]:
                for c3 in face_circles[f2]:
                    crossings = (c1, c2, c3)
                    circ_of = {s: crossings[int(s[1]) - 1] for s in STUBS}
                    for wiring in _matchings(STUBS):
                        if any(circ_of[s] != circ_of[t] for s, t in wiring):
                            continue
                        marked = {c1, c2, c3}
                        need1, need2 = c1 == c2, c2 == c3
                        h1 = sorted(c for c in face_circles[f1] if c not in marked)
                        h2 = sorted(c for c in face_circles[f2] if c not in marked)
                        split_opts1 = (
                            [None]
                            if not need1
                            else [
                                {"arc": 1, "side_u": sorted(su), "side_d": sorted(set(h1) - su)}
                                for su in _subsets(h1)
                            ]
                        )
                        split_opts2 = (
                            [None]
                            if not need2
                            else [
                                {"arc": 2, "side_u": sorted(su), "side_d": sorted(set(h2) - su)}
                                for su in _subsets(h2)
                            ]
                        )
                        for s1 in split_opts1:
                            for s2 in split_opts2:
                                splits = [s for s in (s1, s2) if s is not None]
                                spec = ArcSpec(crossings, (f1, f2), wiring, splits)
                                try:
                                    code = arc_code(ds, spec)
                                except InadmissibleArc:
                                    continue
                                if code not in seen:
                                    seen[code] = spec
    return [seen[k] for k in sorted(seen)]
