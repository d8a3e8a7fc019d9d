"""Acceptance sweep: one test per headline criterion.

Run with -v to get one pass/fail line per criterion.
"""

import random
import time

import pytest

from bypasscalc.arcs import classify_arc, enumerate_arcs
from bypasscalc.braids import braid_of, triangle_count, writhe
from bypasscalc.dividing import DividingSet, MINUS, PLUS, enumerate_states, single_circle
from bypasscalc.disks import GenusSurfaceFamily, torsion_exponent
from bypasscalc.moves import (
    BraidMove,
    Move,
    MoveSequence,
    bypass,
    subtree_circles,
    triangle_mark,
)
from bypasscalc.normalize import Rewrite, normalize, verify_certificate
from bypasscalc.surgery import attach_bypass, attach_triangle, is_trivial_arc


def two_in_face() -> DividingSet:
    return DividingSet(
        {"f0": PLUS, "f1": MINUS, "f2": MINUS},
        {"c0": ("f0", "f1"), "c1": ("f0", "f2")},
    )


def circle_and_nested_pair() -> DividingSet:
    return DividingSet(
        {"f0": PLUS, "f1": MINUS, "f2": MINUS, "f3": PLUS},
        {"c0": ("f0", "f1"), "c1": ("f0", "f2"), "c2": ("f2", "f3")},
    )


def grid_state(m: int, n: int) -> DividingSet:
    faces = {"f0": PLUS, "a": MINUS, "b": MINUS}
    circles = {"ca": ("f0", "a"), "cb": ("f0", "b")}
    for i in range(m):
        faces[f"a{i}"] = PLUS
        circles[f"ca{i}"] = ("a", f"a{i}")
    for i in range(n):
        faces[f"b{i}"] = PLUS
        circles[f"cb{i}"] = ("b", f"b{i}")
    return DividingSet(faces, circles)


def euler_difference(ds: DividingSet) -> int:
    """chi(R+) - chi(R-) on the sphere; every face is planar."""
    adj = ds.adjacency()
    return sum(sign * (2 - len(adj[f])) for f, sign in ds.faces.items())


def strict_triangles(max_circles: int):
    """(state, triangle) pairs whose closing arc is genuinely trivial."""
    out = []
    for ds in enumerate_states(max_circles):
        if ds.n_circles() == 0:
            continue
        for a in enumerate_arcs(ds):
            if classify_arc(ds, a)["type"] != "I":
                continue
            tri = attach_triangle(ds, a)
            if is_trivial_arc(tri.states[2], tri.arcs[2]):
                out.append((ds, tri))
    return out


def spelled(tri) -> list[Move]:
    return [bypass(tri.arcs[0]), bypass(tri.arcs[1]), bypass(tri.arcs[2])]


class TestAcceptance:
    def test_single_encirclement_writhe_minus_two(self):
        start = time.monotonic()
        ds = two_in_face()
        mv = BraidMove("f0", ["c0"], {"c1": 1})
        assert writhe(braid_of(ds, [mv])) == -2
        assert triangle_count(ds, [mv]) == 2
        assert time.monotonic() - start < 1.0

    def test_nested_pair_encirclement_writhe_zero(self):
        ds = circle_and_nested_pair()
        mv = BraidMove("f0", ["c0"], {"c1": 1})
        assert writhe(braid_of(ds, [mv])) == 0

    def test_cluster_grid_triangle_formula(self):
        start = time.monotonic()
        for m in range(1, 5):
            for n in range(1, 5):
                ds, fmap, cmap = grid_state(m, n).relabeled()
                mv = BraidMove(
                    fmap["f0"],
                    sorted(cmap[c] for c in subtree_circles(grid_state(m, n), "f0", "ca")),
                    {cmap["cb"]: 1},
                )
                expect = 2 * (m - 1) * (n - 1)
                assert triangle_count(ds, [mv]) == expect
                report = normalize(MoveSequence(ds, [Move("braid", braid=mv)]))
                assert report.n == expect
        assert time.monotonic() - start < 10.0

    def test_torsion_exponent_formula(self):
        for g in range(4):
            for p in range(1, 6):
                for q in range(1, 6):
                    fam = GenusSurfaceFamily(g, p, q)
                    by_faces = sum(
                        s * (2 - 2 * gg - b) for s, gg, b in fam.faces()
                    )
                    assert torsion_exponent(fam) == 2 * (p - q) == by_faces

    def test_triangle_arc_independence(self):
        rng = random.Random(11)
        states = [ds for ds in enumerate_states(5) if ds.n_circles() >= 1]
        for _ in range(100):
            ds = rng.choice(states)
            arcs = enumerate_arcs(ds)
            alpha, beta = rng.sample(arcs, 2) if len(arcs) > 1 else (arcs[0],) * 2
            ta = attach_triangle(ds, alpha)
            tb = attach_triangle(ds, beta)
            assert (
                ta.states[3].canonical_code() == tb.states[3].canonical_code()
            )
            na = normalize(MoveSequence(ds, [triangle_mark(alpha)]))
            nb = normalize(MoveSequence(ds, [triangle_mark(beta)]))
            assert na.n == nb.n == 1

    def test_triangle_commutes_with_attachments(self):
        rng = random.Random(23)
        pool = strict_triangles(3)
        assert pool
        for _ in range(100):
            ds, tri = rng.choice(pool)
            ds = ds.relabeled()[0]
            tri = attach_triangle(ds, tri.arcs[0])
            closure = [bypass(tri.arcs[1]), bypass(tri.arcs[2])]
            mark_at_mid = triangle_mark(rng.choice(enumerate_arcs(tri.states[1])))
            mark_at_base = triangle_mark(rng.choice(enumerate_arcs(ds)))
            first = MoveSequence(
                ds, [bypass(tri.arcs[0]), mark_at_mid, *closure]
            )
            second = MoveSequence(
                ds, [mark_at_base, bypass(tri.arcs[0]), *closure]
            )
            assert normalize(first).n == normalize(second).n == 2

    def test_type_and_euler_sweep(self):
        start = time.monotonic()
        deltas = {"I": 2, "II": 0, "III": 0, "IV": -2}
        checked = 0
        for ds in enumerate_states(5):
            base = euler_difference(ds)
            for spec in enumerate_arcs(ds):
                cls = classify_arc(ds, spec)
                res = attach_bypass(ds, spec)
                assert euler_difference(res.ds) == base
                assert res.ds.n_circles() - ds.n_circles() == deltas[cls["type"]]
                checked += 1
        assert checked > 100
        assert time.monotonic() - start < 60.0

    def test_normal_form_sanity(self):
        ds = single_circle()
        ot = next(
            a for a in enumerate_arcs(ds) if classify_arc(ds, a)["is_overtwisted"]
        )
        for k in range(1, 6):
            assert normalize(MoveSequence(ds, [triangle_mark(ot)] * k)).n == k
        # trivial insertion at every position of a spelled-out triangle
        tri = attach_triangle(ds, ot)
        base_moves = spelled(tri)
        base_seq = MoveSequence(ds, base_moves)
        states = base_seq.trace()
        base_n = normalize(base_seq).n
        for i, s in enumerate(states):
            trivial = next(
                a for a in enumerate_arcs(s) if is_trivial_arc(s, a)
            )
            padded = MoveSequence(
                ds, base_moves[:i] + [bypass(trivial)] + base_moves[i:]
            )
            assert normalize(padded).n == base_n
        # appending a triangle raises the count by exactly one
        rng = random.Random(5)
        pool = strict_triangles(3)
        for _ in range(200):
            state = ds
            moves = []
            for _ in range(rng.randint(0, 3)):
                mark = triangle_mark(rng.choice(enumerate_arcs(state)))
                moves.append(mark)
            seq = MoveSequence(ds, moves)
            before = normalize(seq).n
            closing = triangle_mark(rng.choice(enumerate_arcs(seq.final())))
            assert normalize(seq.extended(closing)).n == before + 1

    def test_braid_only_matches_negative_writhe(self):
        rng = random.Random(17)
        hosts = []
        for ds in enumerate_states(5):
            dsc = ds.relabeled()[0]
            adj = dsc.adjacency()
            for f, nb in adj.items():
                if len(nb) >= 2:
                    hosts.append((dsc, f, [c for c, _ in nb]))
        checked = 0
        while checked < 200:
            dsc, host, boundary = rng.choice(hosts)
            root = rng.choice(boundary)
            holes = [c for c in boundary if c != root]
            cluster = sorted(subtree_circles(dsc, host, root))
            windings = {
                c: rng.randint(-2, 2) for c in rng.sample(holes, len(holes))
            }
            moves = [
                Move("braid", braid=BraidMove(host, cluster, windings))
                for _ in range(rng.randint(1, 3))
            ]
            seq = MoveSequence(dsc, moves)
            expect = -writhe(braid_of(dsc, [m.braid for m in moves]))
            assert normalize(seq).n == expect
            checked += 1

    def test_certificate_soundness(self):
        ds = single_circle()
        ot = next(
            a for a in enumerate_arcs(ds) if classify_arc(ds, a)["is_overtwisted"]
        )
        tri = attach_triangle(ds, ot)
        sequences = [
            MoveSequence(ds, []),
            MoveSequence(ds, [triangle_mark(ot)] * 3),
            MoveSequence(ds, spelled(tri)),
            MoveSequence(ds, spelled(tri) + [triangle_mark(ot)]),
        ]
        for base, pre in strict_triangles(3)[:4]:
            sequences.append(MoveSequence(base.relabeled()[0], spelled(pre)))
        rng = random.Random(3)
        for seq in sequences:
            sc = normalize(seq)
            assert verify_certificate(seq, sc.certificate)
            if not sc.certificate:
                continue
            idx = rng.randrange(len(sc.certificate))
            rw = sc.certificate[idx]
            bad = list(sc.certificate)
            bad[idx] = Rewrite(
                rw.rule, rw.start, rw.end, rw.delta + 1, rw.replacement
            )
            assert not verify_certificate(seq, bad)
