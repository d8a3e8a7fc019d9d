"""Integer Euler bookkeeping for dividing sets on disks and on closed
surfaces built from a parametric family.

A disk dividing set carries boundary-to-boundary arcs and closed circles.
Region signs alternate across every component, so one sign choice for the
outermost region determines all the rest. Each arc is shared evenly between
the two regions it separates, which keeps chi(R+) + chi(R-) = 1 on the disk
and makes one stabilization move the difference chi(R+) - chi(R-) by exactly
one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

PLUS = 1
MINUS = -1

_SIGN_NAMES = {PLUS: "+", MINUS: "-"}
_SIGN_VALUES = {"+": PLUS, "-": MINUS, 1: PLUS, -1: MINUS}


class InvalidDisk(ValueError):
    pass


@dataclass(frozen=True)
class DiskDividingSet:
    """Arcs and circles dividing a disk into signed regions.

    endpoints: boundary points in cyclic order.
    arcs: a non-crossing perfect pairing of the endpoints.
    circles: (name, host) pairs; the host is a gap index (the boundary
        segment before that endpoint position, as an int) or the name of the
        enclosing circle.
    outer_sign: sign of the region touching the gap before endpoints[0].
    """

    endpoints: tuple[str, ...]
    arcs: tuple[tuple[str, str], ...]
    circles: tuple[tuple[str, object], ...] = ()
    outer_sign: int = PLUS

    def __init__(self, endpoints, arcs, circles=(), outer_sign=PLUS):
        object.__setattr__(self, "endpoints", tuple(endpoints))
        object.__setattr__(
            self, "arcs", tuple(tuple(pair) for pair in arcs)
        )
        object.__setattr__(self, "circles", tuple(tuple(c) for c in circles))
        object.__setattr__(self, "outer_sign", _SIGN_VALUES[outer_sign])
        self._validate()

    def _validate(self):
        pos = {p: i for i, p in enumerate(self.endpoints)}
        if len(pos) != len(self.endpoints):
            raise InvalidDisk("duplicate boundary endpoint labels")
        used = []
        for a, b in self.arcs:
            if a not in pos or b not in pos or a == b:
                raise InvalidDisk(f"arc ({a!r}, {b!r}) does not pair two endpoints")
            used.extend((a, b))
        if sorted(used) != sorted(self.endpoints):
            raise InvalidDisk("arcs must pair off the boundary endpoints exactly")
        # non-crossing: spans must nest like balanced parentheses
        stack = []
        mate = {}
        for a, b in self.arcs:
            mate[a] = b
            mate[b] = a
        seen = set()
        for p in self.endpoints:
            if p in seen:
                if not stack or stack[-1] != mate[p]:
                    raise InvalidDisk("arcs cross inside the disk")
                stack.pop()
            else:
                seen.add(p)
                seen.add(mate[p])
                stack.append(p)
        n = len(self.endpoints)
        names = set()
        for name, host in self.circles:
            if name in names:
                raise InvalidDisk(f"duplicate circle name {name!r}")
            names.add(name)
        for name, host in self.circles:
            if isinstance(host, int):
                if n and not 0 <= host < n:
                    raise InvalidDisk(f"circle {name!r} hosted at bad gap {host}")
                if not n and host != 0:
                    raise InvalidDisk(f"circle {name!r} hosted at bad gap {host}")
            elif host not in names:
                raise InvalidDisk(f"circle {name!r} hosted in unknown circle {host!r}")
        # nesting must be a forest
        parent = {name: host for name, host in self.circles}
        for name in parent:
            slow = name
            seen_chain = set()
            while not isinstance(slow, int):
                if slow in seen_chain:
                    raise InvalidDisk("circle nesting contains a cycle")
                seen_chain.add(slow)
                slow = parent[slow]
        if self.euler_plus() + self.euler_minus() != 1:
            raise InvalidDisk("regions do not assemble into a disk")

    # -- region geometry ---------------------------------------------------

    def _gap_signature(self, g: int) -> frozenset:
        """Arcs separating gap g from the gap before endpoint 0."""
        pos = {p: i for i, p in enumerate(self.endpoints)}
        out = []
        for a, b in self.arcs:
            lo, hi = sorted((pos[a], pos[b]))
            if lo < g <= hi:
                out.append((lo, hi))
        return frozenset(out)

    def region_of_gap(self, g: int) -> frozenset:
        return self._gap_signature(g)

    def gap_sign(self, g: int) -> int:
        sig = self._gap_signature(g)
        return self.outer_sign * (1 if len(sig) % 2 == 0 else -1)

    def _cells(self):
        """(sign, child circle count) for every region and circle interior."""
        children: dict[object, int] = {}
        sign_of: dict[object, int] = {}
        regions = {self._gap_signature(0)} if self.endpoints else {frozenset()}
        for g in range(len(self.endpoints)):
            regions.add(self._gap_signature(g))
        for sig in regions:
            children.setdefault(("region", sig), 0)
            sign_of[("region", sig)] = self.outer_sign * (
                1 if len(sig) % 2 == 0 else -1
            )
        by_name = dict(self.circles)

        def key_of(host):
            if isinstance(host, int):
                return ("region", self._gap_signature(host))
            return ("circle", host)

        def sign_of_circle(name):
            host = by_name[name]
            if isinstance(host, int):
                return -self.gap_sign(host)
            return -sign_of_circle(host)

        for name, host in self.circles:
            children.setdefault(("circle", name), 0)
            sign_of[("circle", name)] = sign_of_circle(name)
        for name, host in self.circles:
            children[key_of(host)] += 1
        return [(sign_of[k], children[k]) for k in children]

    def euler_plus(self) -> Fraction:
        return self._euler(PLUS)

    def euler_minus(self) -> Fraction:
        return self._euler(MINUS)

    def _euler(self, sign: int) -> Fraction:
        total = Fraction(0)
        for s, kids in self._cells():
            if s == sign:
                total += 1 - kids
        # every arc borders one region of each sign; each side owns half
        total -= Fraction(len(self.arcs), 2)
        return total

    def diff(self) -> int:
        """chi(R+) - chi(R-); the arc halves cancel, so this is an integer."""
        d = self.euler_plus() - self.euler_minus()
        assert d.denominator == 1
        return int(d)

    # -- serialization -----------------------------------------------------

    def to_json_obj(self) -> dict:
        return {
            "endpoints": list(self.endpoints),
            "arcs": [list(pair) for pair in self.arcs],
            "circles": [[name, host] for name, host in self.circles],
            "outer_sign": _SIGN_NAMES[self.outer_sign],
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "DiskDividingSet":
        return cls(
            obj["endpoints"],
            obj["arcs"],
            obj.get("circles", ()),
            obj.get("outer_sign", "+"),
        )


def stabilize(d: DiskDividingSet, gap: int, sign) -> DiskDividingSet:
    """Add a boundary-parallel arc at the given boundary segment.

    A positive stabilization needs a negative region there (the new arc cuts
    a positive bigon out of it) and raises diff by one; negative is the
    mirror image.
    """
    sign = _SIGN_VALUES[sign]
    n = len(d.endpoints)
    if n and not 0 <= gap < n:
        raise InvalidDisk(f"no boundary segment {gap} on this disk")
    host_sign = d.gap_sign(gap) if n else d.outer_sign
    if host_sign != -sign:
        raise InvalidDisk(
            f"{_SIGN_NAMES[sign]} stabilization needs a "
            f"{_SIGN_NAMES[-sign]} region at segment {gap}"
        )
    base = 0
    while any(p in (f"s{base}a", f"s{base}b") for p in d.endpoints):
        base += 1
    pa, pb = f"s{base}a", f"s{base}b"
    endpoints = list(d.endpoints)
    endpoints[gap:gap] = [pa, pb]
    circles = [
        (name, host + 2 if isinstance(host, int) and host >= gap else host)
        for name, host in d.circles
    ]
    return DiskDividingSet(
        endpoints, [*d.arcs, (pa, pb)], circles, d.outer_sign
    )


def _boundaries_compatible(d1: DiskDividingSet, d2: DiskDividingSet) -> bool:
    """The endpoints the two sets share must sit in the same cyclic order,
    and every unshared endpoint must be paired with another unshared one
    (a stabilization arc that only one side carries)."""
    shared = set(d1.endpoints) & set(d2.endpoints)
    for d in (d1, d2):
        for a, b in d.arcs:
            if (a in shared) != (b in shared):
                return False
    seq1 = [p for p in d1.endpoints if p in shared]
    seq2 = [p for p in d2.endpoints if p in shared]
    if len(seq1) != len(seq2):
        return False
    if not seq1:
        return True
    return seq2 in [seq1[i:] + seq1[:i] for i in range(len(seq1))]


def difference_cocycle(assignments: dict) -> dict:
    """Per-simplex integers diff(second) - diff(first).

    Each value is a pair of disk dividing sets sharing boundary data; the
    boundaries may differ by stabilization arcs but nothing else.
    """
    out = {}
    for key, (before, after) in assignments.items():
        if not _boundaries_compatible(before, after):
            raise InvalidDisk(
                f"simplex {key!r}: the two dividing sets have different boundaries"
            )
        out[key] = after.diff() - before.diff()
    return out


def verify_theta(theta: dict, delta: dict, incidence: dict) -> bool:
    """True iff twice the signed boundary sum of theta matches delta on every
    triangle of the incidence map."""
    if set(delta) != set(incidence):
        raise InvalidDisk("incidence and delta cover different triangles")
    for tri, edges in incidence.items():
        total = 0
        for edge, sign in edges:
            if edge not in theta:
                raise InvalidDisk(f"triangle {tri!r} references unknown edge {edge!r}")
            if sign not in (PLUS, MINUS):
                raise InvalidDisk(f"bad incidence sign {sign!r}")
            total += sign * theta[edge]
        if 2 * total != delta[tri]:
            return False
    return True


@dataclass(frozen=True)
class GenusSurfaceFamily:
    """A closed genus-g surface divided by g+1 parallel separating circles,
    with p isolated circles on the negative side and q on the positive side."""

    g: int
    p: int
    q: int

    def __post_init__(self):
        if self.g < 0:
            raise InvalidDisk("genus must be nonnegative")
        if self.p < 1 or self.q < 1:
            raise InvalidDisk("each side needs at least one isolated circle")

    def faces(self) -> list[tuple[int, int, int]]:
        """(sign, genus, boundary circle count) for every complementary face."""
        out = [
            (PLUS, 0, (self.g + 1) + self.q),
            (MINUS, 0, (self.g + 1) + self.p),
        ]
        out += [(PLUS, 0, 1)] * self.p  # interiors of the negative-side circles
        out += [(MINUS, 0, 1)] * self.q
        return out

    @classmethod
    def from_json_obj(cls, obj: dict) -> "GenusSurfaceFamily":
        return cls(obj["g"], obj["p"], obj["q"])


def torsion_exponent(fam: GenusSurfaceFamily) -> int:
    """Number of triangles a vertical layer over the family's surface is
    worth; the closed form 2(p - q) is cross-checked against the face-by-face
    Euler sum."""
    closed = 2 * (fam.p - fam.q)
    by_faces = sum(
        sign * (2 - 2 * genus - boundary) for sign, genus, boundary in fam.faces()
    )
    assert closed == by_faces
    return closed
