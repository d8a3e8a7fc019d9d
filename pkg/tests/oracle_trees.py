"""Independent brute-force oracle for signed-tree isomorphism.

Deliberately naive: tries every bijection between face sets and checks that
signs and circle adjacencies are preserved. Only usable for small sets, which
is the point; the fast canonical code is validated against this.
"""

from __future__ import annotations

import itertools

from bypasscalc.dividing import DividingSet


def brute_force_isomorphic(a: DividingSet, b: DividingSet) -> bool:
    if len(a.faces) != len(b.faces) or len(a.circles) != len(b.circles):
        return False
    bf = sorted(b.faces)
    b_edges = {frozenset(p) for p in b.circles.values()}
    for perm in itertools.permutations(bf):
        m = dict(zip(sorted(a.faces), perm))
        if any(a.faces[f] != b.faces[m[f]] for f in a.faces):
            continue
        if {frozenset((m[x], m[y])) for x, y in a.circles.values()} == b_edges:
            return True
    return False
