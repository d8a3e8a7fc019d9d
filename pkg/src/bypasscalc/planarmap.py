"""Rotation-system maps on the sphere.

A map is a graph with a counterclockwise cyclic order of outgoing darts at
each vertex. Faces are the orbits of the composite permutation
next-at-head-after-twin; with ccw rotations each orbit walks a face boundary
counterclockwise, keeping the face on the left of every dart.

Darts are even/odd integer pairs: edge e owns darts 2e and 2e+1, and
twin(d) == d ^ 1. Mutations keep dart ids stable where possible, which the
surgery code relies on for tracking regions across a rewrite.
"""

from __future__ import annotations

from typing import Hashable, Iterator


def twin(dart: int) -> int:
    return dart ^ 1


def edge_of(dart: int) -> int:
    return dart >> 1


class MapError(ValueError):
    pass


class PlanarMap:
    def __init__(self) -> None:
        self.rot: dict[Hashable, list[int]] = {}
        self.tail: dict[int, Hashable] = {}
        self.kind: dict[int, str] = {}
        self.label: dict[int, Hashable] = {}
        self._next_edge = 0
        self._faces: list[list[int]] | None = None

    # -- construction ------------------------------------------------------

    def add_vertex(self, v: Hashable) -> Hashable:
        if v in self.rot:
            raise MapError(f"duplicate vertex {v!r}")
        self.rot[v] = []
        self._faces = None
        return v

    def fresh_vertex(self, hint: str = "v") -> Hashable:
        i = len(self.rot)
        while f"{hint}{i}" in self.rot:
            i += 1
        return self.add_vertex(f"{hint}{i}")

    def _insert_dart(self, v: Hashable, dart: int, after: int | None) -> None:
        r = self.rot[v]
        if after is None:
            r.append(dart)
        else:
            r.insert(r.index(after) + 1, dart)
        self.tail[dart] = v

    def add_edge(
        self,
        u: Hashable,
        v: Hashable,
        kind: str,
        label: Hashable = None,
        after_u: int | None = None,
        after_v: int | None = None,
    ) -> int:
        """New edge between u and v; each dart is inserted immediately after
        the given reference dart in the ccw rotation (appended if None)."""
        e = self._next_edge
        self._next_edge += 1
        d0, d1 = 2 * e, 2 * e + 1
        self._insert_dart(u, d0, after_u)
        self._insert_dart(v, d1, after_v)
        self.kind[e] = kind
        self.label[e] = label
        self._faces = None
        return e

    # -- queries -----------------------------------------------------------

    def vertices(self) -> list[Hashable]:
        return list(self.rot)

    def edges(self) -> list[int]:
        return sorted(self.kind)

    def darts(self) -> Iterator[int]:
        for e in self.kind:
            yield 2 * e
            yield 2 * e + 1

    def degree(self, v: Hashable) -> int:
        return len(self.rot[v])

    def rot_next(self, dart: int) -> int:
        r = self.rot[self.tail[dart]]
        return r[(r.index(dart) + 1) % len(r)]

    def rot_prev(self, dart: int) -> int:
        r = self.rot[self.tail[dart]]
        return r[(r.index(dart) - 1) % len(r)]

    def head(self, dart: int) -> Hashable:
        return self.tail[twin(dart)]

    def face_next(self, dart: int) -> int:
        """Next dart along the face on the left of this dart."""
        return self.rot_next(twin(dart))

    def faces(self) -> list[list[int]]:
        """Face boundary cycles; each dart appears in exactly one cycle."""
        if self._faces is None:
            seen: set[int] = set()
            cycles: list[list[int]] = []
            for d in sorted(self.darts()):
                if d in seen:
                    continue
                cyc = []
                x = d
                while x not in seen:
                    seen.add(x)
                    cyc.append(x)
                    x = self.face_next(x)
                if x != d:
                    raise MapError("face orbit does not close")
                cycles.append(cyc)
            self._faces = cycles
        return self._faces

    def face_of_dart(self) -> dict[int, int]:
        out = {}
        for i, cyc in enumerate(self.faces()):
            for d in cyc:
                out[d] = i
        return out

    def n_components(self) -> int:
        seen: set[Hashable] = set()
        comps = 0
        for v in self.rot:
            if v in seen:
                continue
            comps += 1
            stack = [v]
            while stack:
                x = stack.pop()
                if x in seen:
                    continue
                seen.add(x)
                for d in self.rot[x]:
                    stack.append(self.head(d))
        return comps

    def check_sphere(self) -> None:
        """Euler-characteristic validation for a connected map on S^2."""
        if self.n_components() != 1:
            raise MapError("map is not connected")
        v = len(self.rot)
        e = len(self.kind)
        f = len(self.faces())
        if v - e + f != 2:
            raise MapError(f"not a sphere map: V-E+F = {v}-{e}+{f} = {v - e + f}")

    # -- mutations ---------------------------------------------------------

    def subdivide_at_dart(self, d: int, hint: str = "w") -> Hashable:
        """Split the edge of d by a degree-2 vertex adjacent to tail(d).

        Dart d keeps its tail; twin(d) moves to the new vertex, and a fresh
        edge carries the far half (inheriting kind and label).
        """
        t = twin(d)
        far = self.tail[t]
        w = self.fresh_vertex(hint)
        e = self._next_edge
        self._next_edge += 1
        g0, g1 = 2 * e, 2 * e + 1
        # far half replaces t in the far rotation
        r = self.rot[far]
        r[r.index(t)] = g1
        self.tail[g1] = far
        # new vertex sees the near twin and the far half
        self.rot[w] = [t, g0]
        self.tail[t] = w
        self.tail[g0] = w
        old_e = edge_of(d)
        self.kind[e] = self.kind[old_e]
        self.label[e] = self.label[old_e]
        self._faces = None
        return w

    def delete_edge(self, e: int) -> None:
        for d in (2 * e, 2 * e + 1):
            v = self.tail.pop(d)
            self.rot[v].remove(d)
        del self.kind[e]
        del self.label[e]
        self._faces = None

    def delete_isolated_vertex(self, v: Hashable) -> None:
        if self.rot[v]:
            raise MapError(f"vertex {v!r} is not isolated")
        del self.rot[v]
        self._faces = None

    def smooth_vertex(self, v: Hashable) -> int | None:
        """Remove a degree-2 vertex by fusing its two edges.

        Returns the fused edge id, or None when v sits on a loop (a bare
        circle needs one marker vertex to remain representable).
        """
        if self.degree(v) != 2:
            raise MapError(f"vertex {v!r} has degree {self.degree(v)}")
        x, y = self.rot[v]
        if edge_of(x) == edge_of(y):
            return None
        fx, fy = twin(x), twin(y)
        far1, far2 = self.tail[fx], self.tail[fy]
        e = self._next_edge
        self._next_edge += 1
        g0, g1 = 2 * e, 2 * e + 1
        r1 = self.rot[far1]
        r1[r1.index(fx)] = g0
        self.tail[g0] = far1
        r2 = self.rot[far2]
        r2[r2.index(fy)] = g1
        self.tail[g1] = far2
        lx, ly = self.label[edge_of(x)], self.label[edge_of(y)]
        kx = self.kind[edge_of(x)]
        self.kind[e] = kx
        self.label[e] = lx if lx is not None else ly
        for d in (x, y, fx, fy):
            self.tail.pop(d, None)
        for old in (edge_of(x), edge_of(y)):
            self.kind.pop(old, None)
            self.label.pop(old, None)
        del self.rot[v]
        self._faces = None
        return e

    def copy(self) -> "PlanarMap":
        m = PlanarMap.__new__(PlanarMap)
        m.rot = {v: list(r) for v, r in self.rot.items()}
        m.tail = dict(self.tail)
        m.kind = dict(self.kind)
        m.label = dict(self.label)
        m._next_edge = self._next_edge
        m._faces = None
        return m

    # -- canonical encoding ------------------------------------------------

    def traversal_code(self, start: int, extra=None) -> tuple:
        """Canonical encoding of the connected component of a starting dart.

        Darts are numbered in deterministic search order; the code lists, per
        dart, the numbers of its twin and rotation-successor plus edge kind
        and an optional caller-supplied dart annotation. Isomorphic rooted
        maps (same start dart up to isomorphism) give equal codes.
        """
        index: dict[int, int] = {}
        order: list[int] = []
        queue = [start]
        while queue:
            d = queue.pop(0)
            if d in index:
                continue
            index[d] = len(order)
            order.append(d)
            queue.append(twin(d))
            queue.append(self.rot_next(d))
        rows = []
        for d in order:
            ann = extra(d) if extra is not None else None
            rows.append((index[twin(d)], index[self.rot_next(d)], self.kind[edge_of(d)], ann))
        return tuple(rows)
