"""Bypass attachment surgery on embedded configurations.

The attachment is a local rewrite in a hexagonal frame around the arc: the
frame boundary crosses the three strands at six points, and the surgery
replaces the strands-plus-arc interior by the one-step rotation of the chord
tangle (chords T1-B3, T2-T3, B1-B2 in frame coordinates). Because the frame
exterior is untouched, regions and hanging circles are tracked soundly by
following surviving darts; the frame edges are "virtual": they subdivide
regions during the rewrite and are merged away afterwards.

Iterating the rotation three times restores the identity tangle exactly,
which is what makes attachment triangles exact at this level.
"""

from __future__ import annotations

import itertools
from typing import NamedTuple

from .arcs import (
    ArcSpec,
    Configuration,
    InadmissibleArc,
    arc_code,
    classify_arc,
    embed_arc,
)
from .dividing import DividingSet, InvalidDividingSet
from .planarmap import MapError, PlanarMap, edge_of, twin

ARC_ORDER = ("u1", "d1", "u2", "d2", "u3", "d3")


class EngineError(RuntimeError):
    """Internal consistency failure of the surgery engine."""


class _UF:
    def __init__(self) -> None:
        self.p: dict = {}

    def find(self, x):
        p = self.p
        while p.setdefault(x, x) != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.p[ra] = rb


def _fill_face_labels(cfg: Configuration) -> None:
    """Propagate region labels to darts created by splits/merges."""
    m = cfg.map
    new_face_of: dict[int, str] = {}
    for cyc in m.faces():
        labels = {cfg.face_of[d] for d in cyc if d in cfg.face_of}
        if len(labels) != 1:
            raise EngineError(f"ambiguous region labels {labels!r}")
        label = labels.pop()
        for d in cyc:
            new_face_of[d] = label
    cfg.face_of = new_face_of


def _region_uf(m: PlanarMap, fidx: dict[int, int], kinds: tuple[str, ...]) -> _UF:
    uf = _UF()
    for i in range(len(m.faces())):
        uf.find(i)
    for e, kind in m.kind.items():
        if kind in kinds:
            uf.union(fidx[2 * e], fidx[2 * e + 1])
    return uf


class Frame(NamedTuple):
    chords: tuple[int, int, int]  # edge ids of ch1=(T1,B3), ch2=(T2,T3), ch3=(B1,B2)
    hexagon: tuple[int, ...]  # virtual edge ids


def attach_map(
    cfg: Configuration, arc_name: str, keep_frame: bool = False
) -> tuple[Configuration, Frame, dict[str, tuple[str, ...]]]:
    """Perform the surgery for one embedded arc, in place on a copy.

    Returns the new configuration, the frame data (chords stay as edges so a
    follow-up arc can be placed on them), and a map old region label -> new
    region labels.
    """
    cfg = cfg.copy()
    m = cfg.map
    A1, A2 = cfg.arcs.pop(arc_name)
    p1, p2, p3 = m.tail[A1], m.tail[A2], m.head(A2)

    # cut the six stubs; re-read rotations each time since stubs can share edges
    tb: dict[str, object] = {}
    near_edges: list[int] = []

    def cut(stub_dart: int, name: str) -> None:
        w = m.subdivide_at_dart(stub_dart, hint="x")
        tb[name] = w
        near_edges.append(edge_of(stub_dart))

    cut(m.rot_next(A1), "T1")
    cut(m.rot_prev(A1), "B1")
    cut(m.rot_next(A2), "T2")
    cut(m.rot_prev(A2), "B2")
    cut(m.rot_prev(twin(A2)), "T3")
    cut(m.rot_next(twin(A2)), "B3")

    # every cut vertex has exactly one dart aimed at a crossing; later cuts
    # can move the outward dart, so classify only now
    iv: dict[object, int] = {}
    ov: dict[object, int] = {}
    for w in tb.values():
        x, y = m.rot[w]
        if m.tail[twin(x)] in (p1, p2, p3):
            iv[w], ov[w] = x, y
        elif m.tail[twin(y)] in (p1, p2, p3):
            iv[w], ov[w] = y, x
        else:
            raise EngineError("cut vertex lost contact with its crossing")

    # snapshot of the pre-surgery regions
    fidx = m.face_of_dart()
    uf_old = _region_uf(m, fidx, ("virtual",))
    old_region = {d: uf_old.find(fidx[d]) for d in fidx}
    old_label = {}
    old_sign = {}
    for d, r in old_region.items():
        lbl = cfg.face_of.get(d)
        if lbl is None:
            continue
        if old_label.setdefault(r, lbl) != lbl:
            raise EngineError("pre-surgery region has mixed labels")
        old_sign[r] = cfg.face_sign[lbl]

    # hanging circles live outside the frame; their anchor darts must survive
    # the surgery so that fine position (not just the region) is preserved.
    # Re-anchor any anchor sitting on a doomed edge within its own fine face.
    doomed = {edge_of(A1), edge_of(A2), *near_edges}
    face_cycle = {}
    for cyc in m.faces():
        for d in cyc:
            face_cycle[d] = cyc
    for h, d in cfg.hang.items():
        if edge_of(d) not in doomed:
            continue
        safe = [
            x
            for x in face_cycle[d]
            if m.kind[edge_of(x)] == "circle" and edge_of(x) not in doomed
        ]
        if not safe:
            raise EngineError("no surviving anchor for a hanging circle")
        cfg.hang[h] = min(safe)

    # hexagon frame: east goes after the inward dart at T vertices and after
    # the outward dart at B vertices (and symmetrically for west)
    T1, T2, T3 = tb["T1"], tb["T2"], tb["T3"]
    B1, B2, B3 = tb["B1"], tb["B2"], tb["B3"]
    ea = m.add_edge(T1, T2, "virtual", after_u=iv[T1], after_v=ov[T2])
    eb = m.add_edge(T2, T3, "virtual", after_u=iv[T2], after_v=ov[T3])
    ec = m.add_edge(T3, B3, "virtual", after_u=iv[T3], after_v=ov[B3])
    ed = m.add_edge(B3, B2, "virtual", after_u=iv[B3], after_v=ov[B2])
    ee = m.add_edge(B2, B1, "virtual", after_u=iv[B2], after_v=ov[B1])
    ef = m.add_edge(B1, T1, "virtual", after_u=iv[B1], after_v=ov[T1])
    try:
        m.check_sphere()
    except MapError as exc:
        raise EngineError(f"frame insertion failed: {exc}") from exc

    # remove the strand-and-arc interior
    for e in doomed:
        m.delete_edge(e)
    for v in (p1, p2, p3):
        m.delete_isolated_vertex(v)

    # rotated tangle: chords in the interior disk
    west = {T1: 2 * ef + 1, T2: 2 * ea + 1, T3: 2 * eb + 1}
    east = {B1: 2 * ee + 1, B2: 2 * ed + 1, B3: 2 * ec + 1}
    ch1 = m.add_edge(T1, B3, "circle", after_u=west[T1], after_v=east[B3])
    ch2 = m.add_edge(T2, T3, "circle", after_u=west[T2], after_v=west[T3])
    ch3 = m.add_edge(B1, B2, "circle", after_u=east[B1], after_v=east[B2])
    try:
        m.check_sphere()
    except MapError as exc:
        raise EngineError(f"chord insertion failed: {exc}") from exc

    # rebuild regions by following surviving darts
    fidx2 = m.face_of_dart()
    uf_new = _region_uf(m, fidx2, ("virtual",))
    members: dict[int, list[int]] = {}
    for d in fidx2:
        members.setdefault(uf_new.find(fidx2[d]), []).append(d)
    old_to_new_root: dict[int, int] = {}
    for root, darts in members.items():
        for d in darts:
            if d in old_region:
                prior = old_to_new_root.setdefault(old_region[d], root)
                if prior != root:
                    raise EngineError("pre-surgery region split across regions")
    new_label: dict[int, str] = {}
    new_sign: dict[str, int] = {}
    old2new: dict[str, set[str]] = {}
    for root, darts in sorted(members.items(), key=lambda kv: min(kv[1])):
        olds = {old_region[d] for d in darts if d in old_region}
        if not olds:
            raise EngineError("new region with no surviving darts")
        signs = {old_sign[r] for r in olds}
        if len(signs) != 1:
            raise EngineError("merged regions disagree in sign")
        label = f"\x00r{len(new_label)}"
        new_label[root] = label
        new_sign[label] = signs.pop()
        for r in olds:
            old2new.setdefault(old_label[r], set()).add(label)
    cfg.face_of = {d: new_label[uf_new.find(fidx2[d])] for d in fidx2}
    cfg.face_sign = new_sign

    frame = Frame((ch1, ch2, ch3), (ea, eb, ec, ed, ee, ef))
    if not keep_frame:
        _drop_virtual(cfg)
    return cfg, frame, {k: tuple(sorted(v)) for k, v in old2new.items()}


def _delete_virtual_edges(cfg: Configuration, edges) -> None:
    """Delete frame edges, keeping any that have become bridges: a bridge
    here is the only thing connecting a freshly surgered circle to the rest
    of the map, and deleting it would lose the embedding."""
    m = cfg.map
    for e in edges:
        fidx = m.face_of_dart()
        if fidx[2 * e] == fidx[2 * e + 1]:
            continue
        m.delete_edge(e)
    cfg.face_of = {d: l for d, l in cfg.face_of.items() if d in m.tail}
    _fill_face_labels(cfg)


def _drop_virtual(cfg: Configuration) -> None:
    _delete_virtual_edges(
        cfg, [e for e, k in cfg.map.kind.items() if k == "virtual"]
    )


def embed_rotated(cfg: Configuration, frame: Frame, arc_name: str) -> Configuration:
    """Place the rotated follow-up arc of a triangle on the fresh chords.

    In frame coordinates the next arc runs from ch3 across ch1 to ch2, with
    the rotated frame roles T1'=B1, T2'=T1, T3'=T2. Hexagon edges of the
    frame are consumed (deleted) afterwards.
    """
    cfg = cfg.copy()
    m = cfg.map
    ch1, ch2, ch3 = frame.chords
    q1 = m.subdivide_at_dart(2 * ch3, hint="q")  # on B1-B2
    to_b1, to_b2 = m.rot[q1]
    _fill_face_labels(cfg)
    q2 = m.subdivide_at_dart(2 * ch1, hint="q")  # on T1-B3
    to_t1, to_b3 = m.rot[q2]
    _fill_face_labels(cfg)
    q3 = m.subdivide_at_dart(2 * ch2, hint="q")  # on T2-T3
    to_t2, to_t3 = m.rot[q3]
    _fill_face_labels(cfg)
    a1 = m.add_edge(q1, q2, "arc", label=arc_name, after_u=to_b2, after_v=to_t1)
    a2 = m.add_edge(q2, q3, "arc", label=arc_name, after_u=to_b3, after_v=to_t2)
    try:
        m.check_sphere()
    except MapError as exc:  # pragma: no cover - template is fixed
        raise EngineError(f"rotated arc does not embed: {exc}") from exc
    cfg.arcs[arc_name] = (2 * a1, 2 * a2)
    _fill_face_labels(cfg)
    _delete_virtual_edges(cfg, frame.hexagon)
    return cfg


# -- collapsing a configuration back to a dividing set ----------------------


class Collapse(NamedTuple):
    ds: DividingSet
    face_map: dict[str, str]  # raw label -> canonical face id
    circle_map: dict[object, str]  # component key / hanging id -> canonical id
    region_of: dict[int, str]  # dart -> raw region label
    comp_of: dict[int, object]  # circle edge -> component key


def collapse(cfg: Configuration) -> Collapse:
    """Forget arcs and frames: the canonical dividing set of the state."""
    m = cfg.map
    fidx = m.face_of_dart()
    uf = _region_uf(m, fidx, ("virtual", "arc"))
    region_label: dict[int, str] = {}
    region_sign: dict[str, int] = {}
    roots = sorted({uf.find(i) for i in range(len(m.faces()))})
    for root in roots:
        darts = [d for d in fidx if uf.find(fidx[d]) == root]
        labels = {cfg.face_of[d] for d in darts}
        label = min(labels)
        region_label[root] = label
        region_sign[label] = cfg.face_sign[next(iter(labels))]
        if len({cfg.face_sign[l] for l in labels}) != 1:
            raise EngineError("region with mixed signs")
    region_of = {d: region_label[uf.find(fidx[d])] for d in fidx}

    # circles: components of circle edges glued at shared vertices
    cu = _UF()
    at_vertex: dict[object, list[int]] = {}
    for e, kind in m.kind.items():
        if kind != "circle":
            continue
        cu.find(e)
        for d in (2 * e, 2 * e + 1):
            at_vertex.setdefault(m.tail[d], []).append(e)
    for edges in at_vertex.values():
        for e in edges[1:]:
            cu.union(edges[0], e)
    comps: dict[int, list[int]] = {}
    for e in cu.p:
        comps.setdefault(cu.find(e), []).append(e)
    comp_key = {root: f"\x00t{min(es)}" for root, es in comps.items()}
    comp_of = {e: comp_key[cu.find(e)] for e in cu.p}

    faces = dict(region_sign)
    circles: dict[str, tuple[str, str]] = {}
    for root, es in comps.items():
        sides = set()
        for e in es:
            sides.add(region_of[2 * e])
            sides.add(region_of[2 * e + 1])
        if len(sides) != 2:
            raise EngineError(f"circle with {len(sides)} adjacent regions")
        a, b = sorted(sides)
        circles[comp_key[root]] = (a, b)
    for h, d in cfg.hang.items():
        tree = cfg.hang_trees[h]
        host = region_of[d]
        circles[h] = (host, tree["inner"])
        for f, s in tree["faces"].items():
            faces[f] = s
        for c, (x, y) in tree["circles"].items():
            circles[c] = (x, y)
    raw = DividingSet(faces, circles)
    canonical, fmap, cmap = raw.relabeled()
    return Collapse(canonical, fmap, cmap, region_of, comp_of)


def extract_spec(cfg: Configuration, arc_name: str, col: Collapse | None = None) -> ArcSpec:
    """Descriptor of an embedded arc, in the ids of the collapsed state."""
    if col is None:
        col = collapse(cfg)
    m = cfg.map
    A1, A2 = cfg.arcs[arc_name]
    p1, p2, p3 = m.tail[A1], m.tail[A2], m.head(A2)
    stubs = {
        "u1": m.rot_next(A1),
        "d1": m.rot_prev(A1),
        "u2": m.rot_next(A2),
        "d2": m.rot_prev(A2),
        "u3": m.rot_prev(twin(A2)),
        "d3": m.rot_next(twin(A2)),
    }
    name_of = {d: n for n, d in stubs.items()}
    crossings = tuple(
        col.circle_map[col.comp_of[edge_of(stubs[s])]] for s in ("u1", "u2", "u3")
    )
    faces = (
        col.face_map[col.region_of[A1]],
        col.face_map[col.region_of[A2]],
    )

    def walk(d: int) -> int:
        while True:
            x = twin(d)
            v = m.tail[x]
            if v in (p1, p2, p3):
                return x
            cont = [
                dd
                for dd in m.rot[v]
                if m.kind[edge_of(dd)] == "circle" and dd != x
            ]
            if len(cont) != 1:
                raise EngineError(f"cannot continue circle walk at {v!r}")
            d = cont[0]

    wiring = set()
    for s, d in stubs.items():
        t = name_of[walk(d)]
        wiring.add(tuple(sorted((s, t))))

    fidx = m.face_of_dart()
    splits = []
    crossed = set(crossings)
    for arc_no, (Ad, face_label) in ((1, (A1, faces[0])), (2, (A2, faces[1]))):
        ci, cj = (crossings[0], crossings[1]) if arc_no == 1 else (crossings[1], crossings[2])
        if ci != cj:
            continue
        # the two sides of this sub-arc within its face: fine faces of the
        # region, connected across everything except the sub-arc itself
        uf = _UF()
        for e, k in m.kind.items():
            if e != edge_of(Ad) and k in ("virtual", "arc"):
                uf.union(fidx[2 * e], fidx[2 * e + 1])
        s_u, s_d = uf.find(fidx[Ad]), uf.find(fidx[twin(Ad)])
        if s_u == s_d:
            raise EngineError("separating sub-arc does not separate its face")
        side_u, side_d = [], []

        def place(circle_id: str, fine_face: int) -> None:
            s = uf.find(fine_face)
            if s == s_u:
                side_u.append(circle_id)
            elif s == s_d:
                side_d.append(circle_id)
            else:
                raise EngineError("hanging circle on neither side of a sub-arc")

        for h, dart in cfg.hang.items():
            if col.face_map[col.region_of[dart]] == face_label:
                place(col.circle_map[h], fidx[dart])
        # realized circles not crossed by this arc hang like any others
        for comp in sorted(set(col.comp_of.values())):
            cid = col.circle_map[comp]
            if cid in crossed:
                continue
            touching = {
                fidx[d]
                for e2, c2 in col.comp_of.items()
                if c2 == comp
                for d in (2 * e2, 2 * e2 + 1)
                if col.face_map[col.region_of[d]] == face_label
            }
            if not touching:
                continue
            sides = {uf.find(x) for x in touching}
            if len(sides) != 1:
                raise EngineError("uncrossed circle straddles a sub-arc")
            place(cid, touching.pop())
        splits.append({"arc": arc_no, "side_u": sorted(side_u), "side_d": sorted(side_d)})
    return ArcSpec(crossings, faces, sorted(wiring), splits)


# -- public operations -------------------------------------------------------


class AttachResult(NamedTuple):
    ds: DividingSet
    delta: int
    new_circles: tuple[str, ...]
    circle_map: dict[str, str | None]
    face_map: dict[str, tuple[str, ...]]


def attach_bypass(ds: DividingSet, spec: ArcSpec, _cfg: Configuration | None = None) -> AttachResult:
    """Attach a bypass along the descriptor; returns the canonical new state
    plus id correspondences for everything that persists."""
    cfg = _cfg if _cfg is not None else embed_arc(ds, spec)
    arc_name = next(iter(cfg.arcs))
    cfg2, _, old2new = attach_map(cfg, arc_name, keep_frame=False)
    col = collapse(cfg2)
    marked = set(spec.crossings)
    circle_map: dict[str, str | None] = {}
    for c in ds.circles:
        circle_map[c] = None if c in marked else col.circle_map.get(c)
    new_circles = tuple(
        sorted(col.circle_map[k] for k in set(col.comp_of.values()))
    )
    face_map: dict[str, tuple[str, ...]] = {}
    for f in ds.faces:
        if f in old2new:
            face_map[f] = tuple(sorted(col.face_map[l] for l in old2new[f]))
        elif f in col.face_map:
            face_map[f] = (col.face_map[f],)
        else:  # pragma: no cover
            raise EngineError(f"face {f!r} lost in surgery")
    delta = col.ds.n_circles() - ds.n_circles()
    return AttachResult(col.ds, delta, new_circles, circle_map, face_map)


class TriangleResult(NamedTuple):
    states: tuple[DividingSet, ...]  # four states, first and last equal
    arcs: tuple[ArcSpec, ArcSpec, ArcSpec]


def attach_triangle(ds: DividingSet, spec: ArcSpec) -> TriangleResult:
    """The attachment triangle along an arc: three successive attachments
    whose composite restores the initial state on the nose.

    The follow-up arcs are the one-step rotations of the first in its frame;
    their descriptors are extracted against the canonical intermediate states.
    """
    cfg = embed_arc(ds, spec, "t0")
    cfg, frame, _ = attach_map(cfg, "t0", keep_frame=True)
    states = [ds.relabeled()[0]]
    specs = [spec]
    for i in (1, 2):
        cfg = embed_rotated(cfg, frame, f"t{i}")
        col = collapse(cfg)
        states.append(col.ds)
        specs.append(extract_spec(cfg, f"t{i}", col))
        cfg, frame, _ = attach_map(cfg, f"t{i}", keep_frame=(i == 1))
    col = collapse(cfg)
    states.append(col.ds)
    if states[-1].canonical_code() != states[0].canonical_code():
        raise EngineError("triangle did not close up")
    return TriangleResult(tuple(states), (specs[0], specs[1], specs[2]))


def triangle_arcs(ds: DividingSet, spec: ArcSpec) -> tuple[ArcSpec, ArcSpec]:
    """The two follow-up descriptors completing the triangle of an arc."""
    res = attach_triangle(ds, spec)
    return res.arcs[1], res.arcs[2]


# -- a second disjoint arc: enumeration and left rotation -------------------


def _subtree(tree: dict, root_circle: str, host_face: str) -> dict:
    """The branch of plain hanging-tree data below one of its circles."""
    a, b = tree["circles"][root_circle] if root_circle in tree["circles"] else (
        host_face,
        tree["inner"],
    )
    inner = b if host_face == a else a
    faces = {inner: tree["faces"][inner]}
    circles = {}
    queue = [inner]
    while queue:
        f = queue.pop()
        for c, pair in tree["circles"].items():
            if f in pair and c != root_circle and c not in circles:
                circles[c] = pair
                other = pair[1] if pair[0] == f else pair[0]
                if other not in faces:
                    faces[other] = tree["faces"][other]
                    queue.append(other)
    return {"root": root_circle, "inner": inner, "faces": faces, "circles": circles}


def promote_hang(cfg: Configuration, h: str) -> int:
    """Realize a hanging circle as an actual loop in the map, tethered to its
    anchor by a frame edge so the map stays connected. Returns a dart on the
    loop. Children of the promoted circle become hanging circles of its
    inner face."""
    cfg_m = cfg.map
    d = cfg.hang.pop(h)
    tree = cfg.hang_trees.pop(h)
    host_face_dart = cfg_m.face_of_dart()[d]
    x = cfg_m.subdivide_at_dart(d, hint="x")
    _fill_face_labels(cfg)
    w = cfg_m.fresh_vertex("h")
    loop = cfg_m.add_edge(w, w, "circle", label=h)
    # tether in the fine face of the anchor dart; the loop's inner face must
    # stay free of the tether
    for anchor in list(cfg_m.rot[x]):
        probe = cfg_m.copy()
        t = probe.add_edge(w, x, "virtual", after_u=2 * loop, after_v=anchor)
        probe.check_sphere()
        if probe.face_of_dart()[2 * t + 1] == probe.face_of_dart()[d]:
            cfg_m.add_edge(w, x, "virtual", after_u=2 * loop, after_v=anchor)
            break
    else:
        raise EngineError("cannot tether a promoted circle in its face")
    inner_label = tree["inner"]
    if inner_label in set(cfg.face_of.values()):
        raise EngineError("inner face label collides with a region label")
    cfg.face_of[2 * loop] = inner_label
    cfg.face_sign.setdefault(inner_label, tree["faces"][inner_label])
    _fill_face_labels(cfg)
    for c, pair in tree["circles"].items():
        if inner_label in pair:
            cfg.hang[c] = 2 * loop
            cfg.hang_trees[c] = _subtree(tree, c, inner_label)
    return 2 * loop


def _second_arc_embeddings(cfg: Configuration, seed_darts, name: str = "b"):
    """All embeddings of a further arc whose crossings lie on the circle
    components through the seed darts, as configurations extending cfg."""

    def allowed(m: PlanarMap) -> list[int]:
        out: set[int] = set()
        for s in seed_darts:
            v = m.tail[s]
            seen_v = {v}
            stack = [v]
            while stack:
                u = stack.pop()
                for dd in m.rot[u]:
                    ee = edge_of(dd)
                    if m.kind[ee] != "circle" or ee in out:
                        continue
                    out.add(ee)
                    wv = m.tail[twin(dd)]
                    if wv not in seen_v:
                        seen_v.add(wv)
                        stack.append(wv)
        return sorted(out)

    def placements(base: Configuration):
        # choose three subdivision darts sequentially; later choices may land
        # on halves created by earlier ones
        first = [2 * e for e in allowed(base.map)]
        for d1 in first:
            c1 = base.copy()
            q1 = c1.map.subdivide_at_dart(d1, hint="q")
            _fill_face_labels(c1)
            for d2 in [2 * e for e in allowed(c1.map)]:
                c2 = c1.copy()
                q2 = c2.map.subdivide_at_dart(d2, hint="q")
                _fill_face_labels(c2)
                for d3 in [2 * e for e in allowed(c2.map)]:
                    c3 = c2.copy()
                    q3 = c3.map.subdivide_at_dart(d3, hint="q")
                    _fill_face_labels(c3)
                    yield c3, (q1, q2, q3)

    for base_cfg, (q1, q2, q3) in placements(cfg):
        m = base_cfg.map
        r1, r2, r3 = m.rot[q1], m.rot[q2], m.rot[q3]
        for s1, s2, s3 in itertools.product((0, 1), repeat=3):
            c = base_cfg.copy()
            mm = c.map
            # rotations: (a1, u1, d1) at q1, (a2, u2, a1', d2) at q2,
            # (u3, a2', d3) at q3; s* choose which circle dart is u
            u1d, d1d = (r1[s1], r1[1 - s1])
            u2d, d2d = (r2[s2], r2[1 - s2])
            u3d, d3d = (r3[s3], r3[1 - s3])
            a1 = mm.add_edge(q1, q2, "arc", label=name, after_u=d1d, after_v=u2d)
            a2 = mm.add_edge(q2, q3, "arc", label=name, after_u=d2d, after_v=u3d)
            try:
                mm.check_sphere()
            except MapError:
                continue
            c.arcs[name] = (2 * a1, 2 * a2)
            try:
                _fill_face_labels(c)
            except EngineError:
                continue
            yield c


def _translate_spec(spec: ArcSpec, inv_f: dict, inv_c: dict) -> ArcSpec:
    """Rewrite a descriptor from canonical ids back to a caller's ids."""
    return ArcSpec(
        tuple(inv_c[c] for c in spec.crossings),
        tuple(inv_f[f] for f in spec.faces),
        spec.wiring,
        [
            {
                "arc": s["arc"],
                "side_u": [inv_c[x] for x in s["side_u"]],
                "side_d": [inv_c[x] for x in s["side_d"]],
            }
            for s in spec.splits
        ],
    )


_ROTATION_CACHE: dict[tuple, tuple[ArcSpec, ArcSpec]] = {}


def _circle_seed_darts(cfg: Configuration) -> list[int]:
    """One dart per connected circle component of the map."""
    m = cfg.map
    by_vertex: dict = {}
    for e in m.edges():
        if m.kind[e] != "circle":
            continue
        for d in (2 * e, 2 * e + 1):
            by_vertex.setdefault(m.tail[d], []).append(d)
    seen_v: set = set()
    seeds = []
    for e in m.edges():
        if m.kind[e] != "circle" or m.tail[2 * e] in seen_v:
            continue
        comp = [2 * e]
        stack = [m.tail[2 * e], m.tail[2 * e + 1]]
        while stack:
            v = stack.pop()
            if v in seen_v:
                continue
            seen_v.add(v)
            for d in by_vertex.get(v, ()):
                comp.append(d)
                stack.append(m.tail[twin(d)])
        seeds.append(min(comp))
    return seeds


def left_rotation(
    ds: DividingSet, spec: ArcSpec, order: str = "raise"
) -> tuple[ArcSpec, ArcSpec]:
    """For a degree-preserving arc (type II or III): a disjoint companion arc
    beta together with the arc's re-expression after beta, such that
    attaching beta then the re-expressed arc reaches the same state.

    For a type III arc the factorization is I then IV (order="raise", the
    default) or IV then I (order="lower", only available when enough other
    circles exist to be crossed); a type II arc factors as III twice either
    way. Found by bounded search over simultaneous embeddings near the arc;
    deterministic (first witness in a fixed enumeration order).
    """
    info = classify_arc(ds, spec)
    if info["type"] not in ("II", "III"):
        raise InadmissibleArc(
            f"left rotation applies to degree-preserving arcs, not type {info['type']}"
        )
    if order not in ("raise", "lower"):
        raise ValueError(f"order must be 'raise' or 'lower', not {order!r}")
    cache_key = (
        tuple(sorted(ds.faces.items())),
        tuple(sorted(ds.circles.items())),
        spec.key(),
        order,
    )
    if cache_key in _ROTATION_CACHE:
        hit = _ROTATION_CACHE[cache_key]
        if hit is None:
            raise InadmissibleArc(
                "no companion arc found for left rotation", code="unsupported_rewrite"
            )
        return hit
    if info["type"] == "III":
        want_first, want_second = ("I", "IV") if order == "raise" else ("IV", "I")
    else:
        want_first, want_second = ("III", "III")
    cfg = embed_arc(ds, spec, "al")
    # final state of the plain attachment
    target = attach_bypass(ds, spec, _cfg=cfg.copy()).ds.canonical_code()

    # the companion must cross enough realized circles: only the crossed ones
    # are realized at first, and hanging circles get promoted on demand
    realized = len(set(spec.crossings))
    need = {"I": 1, "III": 2, "IV": 3}[want_first]
    promotions = range(max(0, need - realized), max(0, need - 1) + 1)

    def promoted(base: Configuration, k: int):
        if k == 0:
            yield base
            return
        for h in sorted(base.hang):
            vc = base.copy()
            vc.hang_trees = dict(vc.hang_trees)
            promote_hang(vc, h)
            yield from promoted(vc, k - 1)

    variants: list[tuple[Configuration, list[int]]] = []
    for k in promotions:
        for vc in promoted(cfg, k):
            variants.append((vc, _circle_seed_darts(vc)))
    _, fmap, cmap = ds.relabeled()
    inv_f = {v: k for k, v in fmap.items()}
    inv_c = {v: k for k, v in cmap.items()}
    for base_cfg, seeds in variants:
        for two in _second_arc_embeddings(base_cfg, seeds, "b"):
            try:
                col0 = collapse(two)
                beta = extract_spec(two, "b", col0)
                if classify_arc(col0.ds, beta)["type"] != want_first:
                    continue
                # beta first, the arc re-expressed after it
                after_b, _, _ = attach_map(two, "b", keep_frame=False)
                col_b = collapse(after_b)
                alpha_t = extract_spec(after_b, "al", col_b)
                if classify_arc(col_b.ds, alpha_t)["type"] != want_second:
                    continue
                fin, _, _ = attach_map(after_b, "al", keep_frame=False)
                if collapse(fin).ds.canonical_code() != target:
                    continue
            except (InadmissibleArc, EngineError, InvalidDividingSet):
                continue
            beta_local = _translate_spec(beta, inv_f, inv_c)
            _ROTATION_CACHE[cache_key] = (beta_local, alpha_t)
            return beta_local, alpha_t
    _ROTATION_CACHE[cache_key] = None
    raise InadmissibleArc(
        "no companion arc found for left rotation", code="unsupported_rewrite"
    )


_COMMUTE_CACHE: dict[tuple, tuple[ArcSpec, ArcSpec] | None] = {}


def commute_pair(
    ds: DividingSet, first: ArcSpec, second: ArcSpec, want_pre: str | None = None
) -> tuple[ArcSpec, ArcSpec]:
    """Re-order two successive bypass attachments.

    Searches for a simultaneous embedding of both arcs on the starting state
    in which the second arc, extracted after attaching the first, reproduces
    the given descriptor. Returns (second_pre, first_post): the second arc
    re-expressed on the starting state, and the first re-expressed after it;
    attaching them in that order reaches the same final state. want_pre
    restricts the type of second_pre (a type IV pre-image lowers the state
    profile most). Fails with code "no_commute" when no disjoint embedding
    reproduces the pair.
    """
    cache_key = (
        tuple(sorted(ds.faces.items())),
        tuple(sorted(ds.circles.items())),
        first.key(),
        second.key(),
        want_pre,
    )
    if cache_key in _COMMUTE_CACHE:
        hit = _COMMUTE_CACHE[cache_key]
        if hit is None:
            raise InadmissibleArc(
                "the two attachments admit no commuting embedding",
                code="no_commute",
            )
        return hit
    mid = attach_bypass(ds, first).ds
    second_code = arc_code(mid, second)
    target = attach_bypass(mid, second).ds.canonical_code()
    cfg = embed_arc(ds, first, "al")
    _, fmap, cmap = ds.relabeled()
    inv_f = {v: k for k, v in fmap.items()}
    inv_c = {v: k for k, v in cmap.items()}

    def promoted(base: Configuration, k: int):
        if k == 0:
            yield base
            return
        for h in sorted(base.hang):
            vc = base.copy()
            vc.hang_trees = dict(vc.hang_trees)
            promote_hang(vc, h)
            yield from promoted(vc, k - 1)

    for k in range(0, 3):
        for base_cfg in promoted(cfg, k):
            seeds = _circle_seed_darts(base_cfg)
            for two in _second_arc_embeddings(base_cfg, seeds, "b"):
                try:
                    col0 = collapse(two)
                    b_pre = extract_spec(two, "b", col0)
                    if want_pre and classify_arc(col0.ds, b_pre)["type"] != want_pre:
                        continue
                    after_a, _, _ = attach_map(two, "al", keep_frame=False)
                    col_a = collapse(after_a)
                    b_after = extract_spec(after_a, "b", col_a)
                    if arc_code(col_a.ds, b_after) != second_code:
                        continue
                    after_b, _, _ = attach_map(two, "b", keep_frame=False)
                    col_b = collapse(after_b)
                    a_post = extract_spec(after_b, "al", col_b)
                    fin, _, _ = attach_map(after_b, "al", keep_frame=False)
                    if collapse(fin).ds.canonical_code() != target:
                        continue
                except (InadmissibleArc, EngineError, InvalidDividingSet):
                    continue
                witness = (_translate_spec(b_pre, inv_f, inv_c), a_post)
                _COMMUTE_CACHE[cache_key] = witness
                return witness
    _COMMUTE_CACHE[cache_key] = None
    raise InadmissibleArc(
        "the two attachments admit no commuting embedding", code="no_commute"
    )


def is_trivial_arc(ds: DividingSet, spec: ArcSpec) -> bool:
    """True for a trivial bypass arc: all three crossings on one circle, the
    attachment a no-op, and each of the two sub-arcs cutting an empty bigon
    off the circle (a two-sided fine region with nothing hanging inside)."""
    if classify_arc(ds, spec)["type"] != "II":
        return False
    cfg = embed_arc(ds, spec, "a0")
    m = cfg.map
    cycles = m.faces()
    cycle_of = {d: tuple(cyc) for cyc in cycles for d in cyc}
    anchored = set()
    for d in cfg.hang.values():
        anchored.add(cycle_of[d])
    for a in cfg.arcs["a0"]:
        found = False
        for d in (a, twin(a)):
            cyc = cycle_of[d]
            if (
                len(cyc) == 2
                and {m.kind[edge_of(x)] for x in cyc} == {"arc", "circle"}
                and cyc not in anchored
            ):
                found = True
        if not found:
            return False
    return attach_bypass(ds, spec).ds.canonical_code() == ds.canonical_code()
