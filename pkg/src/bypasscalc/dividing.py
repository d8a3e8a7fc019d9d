"""Dividing sets on the sphere as signed face-adjacency trees.

A dividing set is a finite disjoint union of embedded circles whose
complementary regions are signed so that crossing a circle flips the sign.
On the sphere the face-adjacency structure (faces as vertices, circles as
edges) is a tree, which makes the whole object a finite combinatorial datum:
a tree with +/- labels alternating along every edge.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from typing import Iterable, Iterator, Mapping

PLUS = 1
MINUS = -1

_SIGN_TO_STR = {PLUS: "+", MINUS: "-"}
_STR_TO_SIGN = {"+": PLUS, "-": MINUS}


class InvalidDividingSet(ValueError):
    """Raised when face/circle data does not describe a dividing set."""


class DividingSet:
    """Immutable signed face tree.

    faces: mapping face id -> sign (+1 / -1)
    circles: mapping circle id -> (face id, face id), the two sides.
    """

    __slots__ = ("faces", "circles", "_adj", "_code")

    def __init__(self, faces: Mapping[str, int], circles: Mapping[str, tuple[str, str]]):
        self.faces = dict(faces)
        self.circles = {c: (a, b) for c, (a, b) in circles.items()}
        self._adj: dict[str, list[tuple[str, str]]] | None = None
        self._code: bytes | None = None
        self._validate()

    # -- construction and validation -------------------------------------

    def _validate(self) -> None:
        if not self.faces:
            raise InvalidDividingSet("no faces")
        for f, s in self.faces.items():
            if s not in (PLUS, MINUS):
                raise InvalidDividingSet(f"face {f!r} has sign {s!r}")
        if len(self.faces) != len(self.circles) + 1:
            raise InvalidDividingSet(
                "face count must exceed circle count by one "
                f"({len(self.faces)} faces, {len(self.circles)} circles)"
            )
        for c, (a, b) in self.circles.items():
            if a not in self.faces or b not in self.faces:
                raise InvalidDividingSet(f"circle {c!r} touches unknown face")
            if a == b:
                raise InvalidDividingSet(f"circle {c!r} has the same face on both sides")
            if self.faces[a] == self.faces[b]:
                raise InvalidDividingSet(f"signs do not alternate across circle {c!r}")
        # connectivity; with the count check above this also rules out cycles
        if self.circles or len(self.faces) == 1:
            seen = set()
            stack = [next(iter(self.faces))]
            while stack:
                f = stack.pop()
                if f in seen:
                    continue
                seen.add(f)
                for _, g in self.adjacency()[f]:
                    if g not in seen:
                        stack.append(g)
            if len(seen) != len(self.faces):
                raise InvalidDividingSet("face adjacency graph is not connected")

    def adjacency(self) -> dict[str, list[tuple[str, str]]]:
        """face id -> list of (circle id, neighbor face id), sorted for determinism."""
        if self._adj is None:
            adj: dict[str, list[tuple[str, str]]] = {f: [] for f in self.faces}
            for c, (a, b) in self.circles.items():
                adj[a].append((c, b))
                adj[b].append((c, a))
            for f in adj:
                adj[f].sort()
            self._adj = adj
        return self._adj

    # -- basic invariants --------------------------------------------------

    def n_circles(self) -> int:
        return len(self.circles)

    def euler_report(self) -> dict:
        """Per-sign Euler characteristics of the complementary regions.

        A face bounded by k circles is a planar region of Euler
        characteristic 2 - k; the two signed totals always sum to 2.
        """
        chi = {PLUS: 0, MINUS: 0}
        per_face = {}
        adj = self.adjacency()
        for f, s in self.faces.items():
            x = 2 - len(adj[f])
            per_face[f] = x
            chi[s] += x
        report = {
            "chi_plus": chi[PLUS],
            "chi_minus": chi[MINUS],
            "per_face": per_face,
        }
        if chi[PLUS] + chi[MINUS] != 2:
            raise InvalidDividingSet("euler characteristics do not sum to 2")
        return report

    def depth(self, base: str) -> int:
        """Longest chain of nested circles seen from the given base face."""
        if base not in self.faces:
            raise KeyError(base)
        adj = self.adjacency()

        def down(face: str, parent: str | None) -> int:
            best = 0
            for _, g in adj[face]:
                if g != parent:
                    best = max(best, 1 + down(g, face))
            return best

        return down(base, None)

    def circle_depths(self, base: str) -> dict[str, int]:
        """Circle id -> nesting depth from base (outermost circles have depth 1)."""
        adj = self.adjacency()
        depths: dict[str, int] = {}
        stack: list[tuple[str, str | None, int]] = [(base, None, 0)]
        while stack:
            face, parent, d = stack.pop()
            for c, g in adj[face]:
                if g != parent:
                    depths[c] = d + 1
                    stack.append((g, face, d + 1))
        return depths

    def face_depths(self, base: str) -> dict[str, int]:
        adj = self.adjacency()
        depths = {base: 0}
        stack: list[tuple[str, str | None]] = [(base, None)]
        while stack:
            face, parent = stack.pop()
            for _, g in adj[face]:
                if g != parent:
                    depths[g] = depths[face] + 1
                    stack.append((g, face))
        return depths

    def subtree_circles(self, root_circle: str, host: str) -> set[str]:
        """All circles in the branch hanging below root_circle away from host."""
        a, b = self.circles[root_circle]
        if host not in (a, b):
            raise KeyError(f"face {host!r} is not a side of circle {root_circle!r}")
        inner = b if host == a else a
        out = {root_circle}
        adj = self.adjacency()
        stack = [(inner, host)]
        while stack:
            face, parent = stack.pop()
            for c, g in adj[face]:
                if g != parent:
                    out.add(c)
                    stack.append((g, face))
        return out

    # -- canonical form ----------------------------------------------------

    def _rooted_code(self, face: str, parent: str | None) -> tuple:
        sign = _SIGN_TO_STR[self.faces[face]]
        children = sorted(
            self._rooted_code(g, face)
            for _, g in self.adjacency()[face]
            if g != parent
        )
        return (sign, tuple(children))

    def _centers(self) -> list[str]:
        # iterative leaf stripping on the face tree
        if len(self.faces) <= 2:
            return sorted(self.faces)
        degree = {f: len(n) for f, n in self.adjacency().items()}
        layer = sorted(f for f, d in degree.items() if d <= 1)
        remaining = len(self.faces)
        adj = self.adjacency()
        removed = set()
        while remaining > 2:
            remaining -= len(layer)
            nxt = []
            for f in layer:
                removed.add(f)
                for _, g in adj[f]:
                    if g not in removed:
                        degree[g] -= 1
                        if degree[g] == 1:
                            nxt.append(g)
            layer = sorted(nxt)
        return layer

    def canonical_root(self) -> str:
        """Deterministic root face: the center with the smallest rooted code,
        ties broken toward positive sign then smallest id."""
        best = None
        for f in self._centers():
            key = (self._rooted_code(f, None), -self.faces[f], f)
            if best is None or key < best[0]:
                best = (key, f)
        assert best is not None
        return best[1]

    def canonical_code(self) -> bytes:
        """Complete isomorphism invariant of the signed face tree."""
        if self._code is None:
            root = self.canonical_root()
            text = repr(self._rooted_code(root, None))
            self._code = hashlib.sha256(text.encode()).digest()
        return self._code

    def canonical_hex(self) -> str:
        return self.canonical_code().hex()

    def is_isomorphic(self, other: "DividingSet") -> bool:
        return self.canonical_code() == other.canonical_code()

    def relabeled(self) -> tuple["DividingSet", dict[str, str], dict[str, str]]:
        """Canonical relabeling f0..fn / c0..cm by deterministic preorder.

        Returns (new set, face rename map, circle rename map).
        """
        root = self.canonical_root()
        adj = self.adjacency()
        face_map: dict[str, str] = {}
        circle_map: dict[str, str] = {}
        order: list[tuple[str, str | None]] = [(root, None)]
        while order:
            face, parent = order.pop(0)
            face_map[face] = f"f{len(face_map)}"
            kids = sorted(
                ((self._rooted_code(g, face), g, c) for c, g in adj[face] if g != parent),
            )
            for _, g, c in kids:
                circle_map[c] = f"c{len(circle_map)}"
                order.append((g, face))
        faces = {face_map[f]: s for f, s in self.faces.items()}
        circles = {circle_map[c]: (face_map[a], face_map[b]) for c, (a, b) in self.circles.items()}
        return DividingSet(faces, circles), face_map, circle_map

    # -- serialization -----------------------------------------------------

    def to_json_obj(self) -> dict:
        faces = [
            {"id": f, "sign": _SIGN_TO_STR[s]} for f, s in sorted(self.faces.items())
        ]
        circles = [
            {"id": c, "faces": [a, b]} for c, (a, b) in sorted(self.circles.items())
        ]
        return {"faces": faces, "circles": circles}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2, sort_keys=False)

    @classmethod
    def from_json_obj(cls, obj: dict) -> "DividingSet":
        try:
            faces = {f["id"]: _STR_TO_SIGN[f["sign"]] for f in obj["faces"]}
            circles = {c["id"]: (c["faces"][0], c["faces"][1]) for c in obj["circles"]}
        except (KeyError, TypeError, IndexError) as exc:
            raise InvalidDividingSet(f"malformed dividing set object: {exc}") from exc
        if len(faces) != len(obj["faces"]):
            raise InvalidDividingSet("duplicate face ids")
        if len(circles) != len(obj["circles"]):
            raise InvalidDividingSet("duplicate circle ids")
        return cls(faces, circles)

    @classmethod
    def from_json(cls, text: str) -> "DividingSet":
        return cls.from_json_obj(json.loads(text))

    def __repr__(self) -> str:  # pragma: no cover
        return f"DividingSet({len(self.faces)} faces, {len(self.circles)} circles)"


def single_circle() -> DividingSet:
    """The base state: one circle, positive outside, negative inside."""
    return DividingSet({"f0": PLUS, "f1": MINUS}, {"c0": ("f0", "f1")})


def enumerate_states(max_circles: int) -> Iterator[DividingSet]:
    """All dividing sets with at most max_circles circles, one per
    isomorphism class, in a deterministic order.

    Enumerates labeled trees from sequence codes and dedups by canonical code.
    """
    seen: set[bytes] = set()
    out: list[tuple[bytes, DividingSet]] = []
    for k in range(0, max_circles + 1):
        n = k + 1  # faces
        for tree_edges in _labeled_trees(n):
            for root_sign in (PLUS, MINUS):
                faces: dict[str, int] = {}
                # signs determined by parity of distance from node 0
                depth = {0: 0}
                adj: dict[int, list[int]] = {i: [] for i in range(n)}
                for a, b in tree_edges:
                    adj[a].append(b)
                    adj[b].append(a)
                stack = [0]
                while stack:
                    v = stack.pop()
                    for w in adj[v]:
                        if w not in depth:
                            depth[w] = depth[v] + 1
                            stack.append(w)
                for i in range(n):
                    faces[f"f{i}"] = root_sign if depth[i] % 2 == 0 else -root_sign
                circles = {
                    f"c{j}": (f"f{a}", f"f{b}") for j, (a, b) in enumerate(tree_edges)
                }
                ds = DividingSet(faces, circles)
                code = ds.canonical_code()
                if code not in seen:
                    seen.add(code)
                    out.append((code, ds.relabeled()[0]))
    out.sort(key=lambda t: (len(t[1].circles), t[0]))
    for _, ds in out:
        yield ds


def _labeled_trees(n: int) -> Iterator[list[tuple[int, int]]]:
    """All labeled trees on n nodes (Pruefer decoding); n <= 7 in practice."""
    if n == 1:
        yield []
        return
    if n == 2:
        yield [(0, 1)]
        return
    for seq in itertools.product(range(n), repeat=n - 2):
        deg = [1] * n
        for v in seq:
            deg[v] += 1
        edges = []
        pruefer = list(seq)
        leaves = sorted(i for i in range(n) if deg[i] == 1)
        for v in pruefer:
            leaf = leaves.pop(0)
            edges.append((leaf, v))
            deg[v] -= 1
            if deg[v] == 1:
                # insert keeping sorted order
                import bisect

                bisect.insort(leaves, v)
        edges.append((leaves[0], leaves[1]))
        yield edges
