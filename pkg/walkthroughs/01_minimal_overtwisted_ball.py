"""From the standard sphere to the minimal overtwisted ball.

The single-circle dividing set admits exactly two attachment classes: one
does nothing, the other starts a triangle. Attaching the full triangle
returns to the single circle, and the normalizer prices the loop at one
triangle.
"""

from bypasscalc import single_circle
from bypasscalc.arcs import classify_arc, enumerate_arcs
from bypasscalc.moves import MoveSequence, bypass
from bypasscalc.normalize import normalize
from bypasscalc.render import render_ascii
from bypasscalc.surgery import attach_triangle


def main():
    ds = single_circle()
    print("start:", render_ascii(ds))

    arcs = enumerate_arcs(ds)
    for spec in arcs:
        cls = classify_arc(ds, spec)
        tag = "overtwisted" if cls["is_overtwisted"] else "trivial"
        print(f"  arc type {cls['type']} ({tag})")

    ot = next(a for a in arcs if classify_arc(ds, a)["is_overtwisted"])
    tri = attach_triangle(ds, ot)
    for i, state in enumerate(tri.states):
        print(f"after {i} attachments:", render_ascii(state))

    seq = MoveSequence(ds, [bypass(a) for a in tri.arcs])
    report = normalize(seq).report()
    print("normal form:", report)
    assert report["n"] == 1


if __name__ == "__main__":
    main()
