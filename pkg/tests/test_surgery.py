from __future__ import annotations

import pytest

from bypasscalc.arcs import ArcSpec, InadmissibleArc, classify_arc, enumerate_arcs
from bypasscalc.dividing import (
    MINUS,
    PLUS,
    DividingSet,
    enumerate_states,
    single_circle,
)
from bypasscalc.surgery import (
    attach_bypass,
    attach_triangle,
    left_rotation,
    triangle_arcs,
)


def circle_arcs() -> dict[str, ArcSpec]:
    """The two arcs on the base state, keyed by their classification."""
    ds = single_circle()
    out = {}
    for spec in enumerate_arcs(ds):
        info = classify_arc(ds, spec)
        out["ot" if info["is_overtwisted"] else "trivial"] = spec
    return out


class TestAttachOnCircle:
    def test_exactly_two_arcs(self):
        assert set(circle_arcs()) == {"ot", "trivial"}

    def test_trivial_arc_is_identity(self):
        ds = single_circle()
        res = attach_bypass(ds, circle_arcs()["trivial"])
        assert res.delta == 0
        assert res.ds.canonical_code() == ds.canonical_code()
        # the crossed circle is consumed and reborn
        assert res.circle_map == {"c0": None}
        assert res.new_circles == ("c0",)

    def test_overtwisted_arc_gives_the_chain(self):
        res = attach_bypass(single_circle(), circle_arcs()["ot"])
        assert res.delta == 2
        chain = DividingSet(
            {"f0": PLUS, "f1": MINUS, "f2": MINUS, "f3": PLUS},
            {"c0": ("f0", "f1"), "c1": ("f2", "f0"), "c2": ("f3", "f2")},
        )
        assert res.ds.canonical_code() == chain.canonical_code()

    def test_face_maps_cover_every_old_face(self):
        ds = single_circle()
        for spec in circle_arcs().values():
            res = attach_bypass(ds, spec)
            assert set(res.face_map) == set(ds.faces)
            for targets in res.face_map.values():
                for f in targets:
                    assert f in res.ds.faces


class TestTriangle:
    def test_overtwisted_trace(self):
        tri = attach_triangle(single_circle(), circle_arcs()["ot"])
        assert [s.n_circles() for s in tri.states] == [1, 3, 1, 1]

    def test_trivial_trace(self):
        tri = attach_triangle(single_circle(), circle_arcs()["trivial"])
        assert [s.n_circles() for s in tri.states] == [1, 1, 3, 1]

    def test_triangle_returns_to_start(self):
        tri = attach_triangle(single_circle(), circle_arcs()["ot"])
        assert tri.states[0].canonical_code() == tri.states[3].canonical_code()

    def test_follow_up_arcs_replay(self):
        # replaying the extracted descriptors step by step hits the same states
        ds = single_circle()
        spec = circle_arcs()["ot"]
        tri = attach_triangle(ds, spec)
        cur = tri.states[0]
        for arc, nxt in zip(tri.arcs, tri.states[1:]):
            cur = attach_bypass(cur, arc).ds
            assert cur.canonical_code() == nxt.canonical_code()

    def test_triangle_arcs_shortcut(self):
        ds = single_circle()
        spec = circle_arcs()["ot"]
        a1, a2 = triangle_arcs(ds, spec)
        assert (a1, a2) == attach_triangle(ds, spec).arcs[1:]


class TestSweep:
    """Every admissible arc on every small state behaves as classified."""

    def test_delta_matches_classification(self):
        for ds in enumerate_states(3):
            for spec in enumerate_arcs(ds):
                info = classify_arc(ds, spec)
                res = attach_bypass(ds, spec)
                assert res.delta == info["delta"]
                assert res.ds.n_circles() == ds.n_circles() + info["delta"]

    def test_all_triangles_close(self):
        for ds in enumerate_states(3):
            for spec in enumerate_arcs(ds):
                tri = attach_triangle(ds, spec)
                assert (
                    tri.states[0].canonical_code() == tri.states[3].canonical_code()
                )

    def test_crossed_circles_die_others_survive(self):
        for ds in enumerate_states(3):
            for spec in enumerate_arcs(ds):
                res = attach_bypass(ds, spec)
                marked = set(spec.crossings)
                for c in ds.circles:
                    if c in marked:
                        assert res.circle_map[c] is None
                    else:
                        assert res.circle_map[c] in res.ds.circles


class TestHangTracking:
    """A circle hanging off the surgered region must come back in the same
    position after the triangle, not merely in the same coarse region."""

    def state_and_arc(self):
        ds = DividingSet(
            {"f0": PLUS, "f1": MINUS, "f2": MINUS, "f3": PLUS, "f4": PLUS},
            {
                "c0": ("f1", "f0"),
                "c1": ("f0", "f2"),
                "c2": ("f3", "f1"),
                "c3": ("f2", "f4"),
            },
        )
        spec = ArcSpec(
            ("c0", "c0", "c1"),
            ("f1", "f0"),
            (("d1", "d2"), ("d3", "u3"), ("u1", "u2")),
            [{"arc": 1, "side_u": [], "side_d": ["c2"]}],
        )
        return ds, spec

    def test_triangle_closes(self):
        ds, spec = self.state_and_arc()
        tri = attach_triangle(ds, spec)
        assert tri.states[0].canonical_code() == tri.states[3].canonical_code()

    def test_attach_is_valid(self):
        ds, spec = self.state_and_arc()
        res = attach_bypass(ds, spec)
        assert res.delta == 0
        assert res.ds.n_circles() == 4


class TestLeftRotation:
    def test_rejects_component_changing_arcs(self):
        ds = single_circle()
        with pytest.raises(InadmissibleArc):
            left_rotation(ds, circle_arcs()["ot"])

    def test_trivial_arc_has_no_companion(self):
        ds = single_circle()
        with pytest.raises(InadmissibleArc) as ei:
            left_rotation(ds, circle_arcs()["trivial"])
        assert ei.value.code == "unsupported_rewrite"

    def test_rotation_factors_every_small_arc(self):
        hits = misses = 0
        for ds in enumerate_states(3):
            for spec in enumerate_arcs(ds):
                info = classify_arc(ds, spec)
                if info["type"] not in ("II", "III"):
                    continue
                try:
                    beta, alpha_t = left_rotation(ds, spec)
                except InadmissibleArc as e:
                    assert e.code == "unsupported_rewrite"
                    assert info["is_trivial"]
                    misses += 1
                    continue
                want = ("I", "IV") if info["type"] == "III" else ("III", "III")
                assert classify_arc(ds, beta)["type"] == want[0]
                step = attach_bypass(ds, beta)
                assert classify_arc(step.ds, alpha_t)["type"] == want[1]
                final = attach_bypass(step.ds, alpha_t)
                target = attach_bypass(ds, spec)
                assert final.ds.canonical_code() == target.ds.canonical_code()
                hits += 1
        assert hits == 28
        assert misses == 1
