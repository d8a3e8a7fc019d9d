"""Pure braid motions priced in triangles.

Carrying one isolated circle once around another crosses each pair of
strands twice, for a writhe of -2; the motion is worth two triangle
attachments. Larger clusters follow the 2(m-1)(n-1) pattern, and the
normalizer agrees with the writhe count on every case.
"""

from bypasscalc.braids import braid_of, triangle_count, writhe
from bypasscalc.dividing import MINUS, PLUS, DividingSet
from bypasscalc.moves import BraidMove, Move, MoveSequence, subtree_circles
from bypasscalc.normalize import normalize


def cluster_state(m: int, n: int) -> DividingSet:
    faces = {"f0": PLUS, "a": MINUS, "b": MINUS}
    circles = {"ca": ("f0", "a"), "cb": ("f0", "b")}
    for i in range(m):
        faces[f"a{i}"] = PLUS
        circles[f"ca{i}"] = ("a", f"a{i}")
    for i in range(n):
        faces[f"b{i}"] = PLUS
        circles[f"cb{i}"] = ("b", f"b{i}")
    return DividingSet(faces, circles)


def main():
    two = DividingSet(
        {"f0": PLUS, "f1": MINUS, "f2": MINUS},
        {"c0": ("f0", "f1"), "c1": ("f0", "f2")},
    )
    once_around = BraidMove("f0", ["c0"], {"c1": 1})
    print("writhe of one encirclement:", writhe(braid_of(two, [once_around])))
    print("triangles:", triangle_count(two, [once_around]))

    for m, n in [(1, 1), (2, 2), (3, 2), (4, 4)]:
        raw = cluster_state(m, n)
        ds, fmap, cmap = raw.relabeled()
        mv = BraidMove(
            fmap["f0"],
            sorted(cmap[c] for c in subtree_circles(raw, "f0", "ca")),
            {cmap["cb"]: 1},
        )
        by_writhe = triangle_count(ds, [mv])
        by_normal = normalize(MoveSequence(ds, [Move("braid", braid=mv)])).n
        print(f"({m},{n}) cluster: writhe path {by_writhe}, "
              f"normalizer path {by_normal}")
        assert by_writhe == by_normal == 2 * (m - 1) * (n - 1)


if __name__ == "__main__":
    main()
