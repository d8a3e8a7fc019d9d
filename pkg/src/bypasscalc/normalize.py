"""Rewriting move sequences to the stable normal form.

A sequence with equal endpoint states is driven to a pure triangle count n:
braids are pushed to the end and converted to triangles by their writhe,
degree-preserving attachments are deleted (trivial) or split by rotation,
complexity peaks are commuted away or cancelled against triangles, and the
low-complexity tail is matched against a precomputed table. Every step is a
locally checkable rewrite collected into a replayable certificate.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .arcs import ArcSpec, InadmissibleArc, arc_code, classify_arc
from .braids import triangle_count
from .dividing import DividingSet
from .moves import (
    BraidMove,
    Move,
    MoveError,
    MoveSequence,
    bypass,
    validate_braid,
)
from .surgery import (
    attach_bypass,
    attach_triangle,
    commute_pair,
    is_trivial_arc,
    left_rotation,
)
from .tailtable import lookup_pair

MAX_STEPS = 10_000


@dataclass(frozen=True)
class Rewrite:
    """One locally checkable step: moves[start:end] become the replacement."""

    rule: str
    start: int
    end: int
    delta: int = 0
    replacement: tuple = ()

    RULES = (
        "DeleteTrivial",
        "LeftRotationSplit",
        "DisjointCommute",
        "TriangleInsert",
        "TriangleCancel",
        "BraidPushToEnd",
        "BraidToTriangles",
        "BigonEliminate",
        "TriangleRegionEliminate",
        "PeakCommute",
        "PeakTypeIIIResolve",
        "TailRecognize",
    )

    def __post_init__(self):
        if self.rule not in self.RULES:
            raise ValueError(f"unknown rewrite rule {self.rule!r}")
        object.__setattr__(
            self, "replacement", tuple(self._as_obj(m) for m in self.replacement)
        )

    @staticmethod
    def _as_obj(m):
        return m.to_json_obj() if isinstance(m, Move) else m

    def replacement_moves(self) -> list[Move]:
        return [Move.from_json_obj(o) for o in self.replacement]

    def to_json_obj(self) -> dict:
        return {
            "rule": self.rule,
            "start": self.start,
            "end": self.end,
            "delta": self.delta,
            "replacement": list(self.replacement),
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Rewrite":
        return cls(
            obj["rule"],
            obj["start"],
            obj["end"],
            obj.get("delta", 0),
            tuple(obj.get("replacement", ())),
        )


@dataclass(frozen=True)
class StableClass:
    n: int
    r: int
    certificate: tuple[Rewrite, ...]

    def report(self) -> dict:
        return {"n": self.n, "r": self.r, "steps": len(self.certificate)}


def certificate_to_jsonl(cert) -> str:
    return "\n".join(json.dumps(rw.to_json_obj()) for rw in cert) + ("\n" if cert else "")

def certificate_from_jsonl(text: str) -> list[Rewrite]:
    return [
        Rewrite.from_json_obj(json.loads(line))
        for line in text.splitlines()
        if line.strip()
    ]


class NormalizeError(RuntimeError):
    def __init__(self, message: str, *, code: str, partial=()):
        super().__init__(message)
        self.code = code
        self.partial = tuple(partial)


def _trace(initial: DividingSet, moves: list[Move]) -> list[DividingSet]:
    return MoveSequence(initial, list(moves)).trace()


def _pair_is_triangle(s: DividingSet, first: ArcSpec, second: ArcSpec) -> bool:
    """True when attaching first then second completes a triangle whose third
    attachment is a genuinely trivial bypass; the pair is then worth one
    triangle exactly."""
    if classify_arc(s, first)["type"] != "I":
        return False
    mid = attach_bypass(s, first).ds
    if classify_arc(mid, second)["type"] != "IV":
        return False
    tri = attach_triangle(s, first)
    if arc_code(tri.states[1], tri.arcs[1]) != arc_code(mid, second):
        return False
    return is_trivial_arc(tri.states[2], tri.arcs[2])


def _remap_braid(s: DividingSet, arc: ArcSpec, braid: BraidMove) -> BraidMove:
    """Re-express a braid move across the bypass it is pushed past."""
    res = attach_bypass(s, arc)
    cluster = []
    for c in braid.cluster:
        img = res.circle_map.get(c)
        if img is None:
            raise NormalizeError(
                f"braid cluster circle {c!r} is consumed by the next bypass",
                code="unsupported_transport",
            )
        cluster.append(img)
    windings = []
    for c, w in braid.windings:
        img = res.circle_map.get(c)
        if img is None:
            if w != 0:
                raise NormalizeError(
                    f"braid winds around circle {c!r} consumed by the next bypass",
                    code="unsupported_transport",
                )
            continue
        windings.append((img, w))
    if len({c for c, _ in windings}) != len(windings):
        raise NormalizeError(
            "braid winding holes merge under the next bypass",
            code="unsupported_transport",
        )
    for host in res.face_map.get(braid.host, ()):
        cand = BraidMove(host, cluster, windings, braid.crossings)
        try:
            validate_braid(res.ds, cand)
            return cand
        except MoveError:
            continue
    raise NormalizeError(
        "braid host face does not survive the next bypass",
        code="unsupported_transport",
    )


class _Session:
    """Working state of one normalization run."""

    def __init__(self, seq: MoveSequence):
        self.initial = seq.trace()[0]
        self.moves: list[Move] = list(seq.moves)
        self.cert: list[Rewrite] = []
        self.ledger = 0

    def emit(self, rule, start, end, delta, replacement):
        rw = Rewrite(rule, start, end, delta, tuple(replacement))
        self.cert.append(rw)
        self.ledger += delta
        self.moves[start:end] = [Move.from_json_obj(o) for o in rw.replacement]
        if len(self.cert) > MAX_STEPS:
            raise NormalizeError(
                "rewrite count exceeded the iteration cap",
                code="iteration_cap",
                partial=self.cert,
            )

    def fail(self, message, code):
        raise NormalizeError(message, code=code, partial=self.cert)

    def trace(self):
        return _trace(self.initial, self.moves)

    # -- phases ------------------------------------------------------------

    def absorb_triangles(self):
        i = 0
        while i < len(self.moves):
            if self.moves[i].kind == "triangle":
                self.emit("TriangleCancel", i, i + 1, 1, ())
            else:
                i += 1

    def push_braids(self):
        while True:
            tr = self.trace()
            for i in range(len(self.moves) - 1):
                if self.moves[i].kind == "braid" and self.moves[i + 1].kind == "bypass":
                    nxt = self.moves[i + 1]
                    try:
                        moved = _remap_braid(tr[i], nxt.arc, self.moves[i].braid)
                    except NormalizeError as exc:
                        raise NormalizeError(
                            str(exc), code=exc.code, partial=self.cert
                        ) from exc
                    self.emit(
                        "BraidPushToEnd", i, i + 2, 0, (nxt, Move("braid", braid=moved))
                    )
                    break
            else:
                return

    def braids_to_triangles(self):
        k = len(self.moves)
        while k > 0 and self.moves[k - 1].kind == "braid":
            k -= 1
        if k == len(self.moves):
            return
        tr = self.trace()
        braids = [m.braid for m in self.moves[k:]]
        l = triangle_count(tr[k], braids)
        self.emit("BraidToTriangles", k, len(self.moves), l, ())

    def eliminate_degree_preserving(self):
        while True:
            tr = self.trace()
            before = self._degree_counts()
            for i, mv in enumerate(self.moves):
                if mv.kind != "bypass":
                    continue
                kind = classify_arc(tr[i], mv.arc)["type"]
                if kind not in ("II", "III"):
                    continue
                if is_trivial_arc(tr[i], mv.arc):
                    self.emit("DeleteTrivial", i, i + 1, 0, ())
                    break
                try:
                    beta, alpha_t = left_rotation(tr[i], mv.arc)
                except InadmissibleArc as exc:
                    self.fail(
                        f"move {i}: no rotation for a nontrivial type {kind} arc",
                        code=getattr(exc, "code", "unsupported_rewrite"),
                    )
                self.emit(
                    "LeftRotationSplit", i, i + 1, 0, (bypass(beta), bypass(alpha_t))
                )
                break
            else:
                return
            after = self._degree_counts()
            if after >= before:
                self.fail("degree elimination made no progress", code="iteration_cap")

    def _degree_counts(self):
        tr = self.trace()
        two = three = 0
        for i, mv in enumerate(self.moves):
            if mv.kind != "bypass":
                continue
            kind = classify_arc(tr[i], mv.arc)["type"]
            two += kind == "II"
            three += kind == "III"
        return (two, three)

    def _measure(self):
        circles = [s.n_circles() for s in self.trace()]
        c = max(circles)
        return (c, sum(x == c for x in circles), len(self.moves))

    def reduce_peaks(self):
        while True:
            tr = self.trace()
            circles = [s.n_circles() for s in tr]
            c = max(circles)
            if c <= circles[0] + 2:
                return
            before = self._measure()
            peaks = [p for p in range(len(circles)) if circles[p] == c]
            if not self._reduce_one_peak(tr, peaks):
                self.fail(
                    f"no supported reduction at any complexity-{c} peak",
                    code="unsupported_peak",
                )
            if self._measure() >= before:
                self.fail("peak reduction made no progress", code="unsupported_peak")

    def _reduce_one_peak(self, tr, peaks) -> bool:
        for p in peaks:
            A, B = self.moves[p - 1], self.moves[p]
            if A.kind != "bypass" or B.kind != "bypass":
                continue
            s = tr[p - 1]
            try:
                b_pre, a_post = commute_pair(s, A.arc, B.arc, want_pre="IV")
                self.emit(
                    "PeakCommute", p - 1, p + 1, 0, (bypass(b_pre), bypass(a_post))
                )
                return True
            except InadmissibleArc:
                pass
            if _pair_is_triangle(s, A.arc, B.arc):
                self.emit("TriangleCancel", p - 1, p + 1, 1, ())
                return True
            try:
                b_pre, a_post = commute_pair(s, A.arc, B.arc, want_pre="III")
            except InadmissibleArc:
                continue
            # resolve the two resulting degree-preserving arcs downward
            mid = attach_bypass(s, b_pre).ds
            try:
                u1, u2 = left_rotation(s, b_pre, order="lower")
                v1, v2 = left_rotation(mid, a_post, order="lower")
            except InadmissibleArc:
                continue
            self.emit("PeakCommute", p - 1, p + 1, 0, (bypass(b_pre), bypass(a_post)))
            self.emit(
                "PeakTypeIIIResolve", p - 1, p, 0, (bypass(u1), bypass(u2))
            )
            self.emit(
                "PeakTypeIIIResolve", p + 1, p + 2, 0, (bypass(v1), bypass(v2))
            )
            return True
        return False

    def recognize_tail(self):
        while self.moves:
            tr = self.trace()
            s = tr[0]
            A = self.moves[0]
            if A.kind != "bypass" or len(self.moves) < 2:
                self.fail("tail is not a pair of attachments", code="unsupported_tail")
            B = self.moves[1]
            if B.kind != "bypass":
                self.fail("tail is not a pair of attachments", code="unsupported_tail")
            mid = attach_bypass(s, A.arc).ds
            entry = lookup_pair(
                s.canonical_hex(),
                arc_code(s, A.arc).hex(),
                arc_code(mid, B.arc).hex(),
            )
            if entry is not None:
                self.emit("TailRecognize", 0, 2, entry["n"], ())
                continue
            if _pair_is_triangle(s, A.arc, B.arc):
                self.emit("TailRecognize", 0, 2, 1, ())
                continue
            self.fail(
                "terminal attachment pair is not a recognized triangle",
                code="unsupported_tail",
            )


def normalize(seq: MoveSequence, max_steps: int | None = None) -> StableClass:
    """Drive a sequence with equal endpoint states to its triangle count.

    Deterministic; raises NormalizeError with a partial certificate when a
    step is outside the supported calculus or the iteration cap is hit.
    max_steps overrides the module-wide rewrite cap for this run.
    """
    global MAX_STEPS
    if max_steps is not None:
        saved, MAX_STEPS = MAX_STEPS, max_steps
        try:
            return normalize(seq)
        finally:
            MAX_STEPS = saved
    tr = seq.trace()
    if tr[0].canonical_code() != tr[-1].canonical_code():
        raise NormalizeError(
            "sequence endpoints differ; no normal form is defined",
            code="endpoint_mismatch",
        )
    ses = _Session(seq)
    ses.absorb_triangles()
    ses.push_braids()
    ses.braids_to_triangles()
    ses.eliminate_degree_preserving()
    ses.reduce_peaks()
    ses.recognize_tail()
    running = 0
    low = 0
    for rw in ses.cert:
        running += rw.delta
        low = min(low, running)
    return StableClass(ses.ledger, max(0, -low), tuple(ses.cert))


def stable_equiv(seq1: MoveSequence, seq2: MoveSequence) -> bool:
    return normalize(seq1).n == normalize(seq2).n


def _check_rewrite(initial, moves, rw: Rewrite) -> str | None:
    """None when the rewrite is locally valid at its location, else why not."""
    if not (0 <= rw.start <= rw.end <= len(moves)):
        return "location out of range"
    seg = moves[rw.start : rw.end]
    rep = rw.replacement_moves()
    try:
        tr = _trace(initial, moves)
    except MoveError as exc:
        return f"sequence invalid before rewrite: {exc}"
    s = tr[rw.start]

    def same_endpoints() -> str | None:
        try:
            out = _trace(s, rep)
        except MoveError as exc:
            return f"replacement invalid: {exc}"
        if out[-1].canonical_code() != tr[rw.end].canonical_code():
            return "replacement does not reach the same state"
        return None

    if rw.rule == "DeleteTrivial":
        if len(seg) != 1 or seg[0].kind != "bypass" or rep:
            return "pattern mismatch"
        if not is_trivial_arc(s, seg[0].arc):
            return "deleted arc is not a trivial bypass"
        if rw.delta != 0:
            return "ledger delta must be 0"
        return None
    if rw.rule in ("LeftRotationSplit", "PeakTypeIIIResolve"):
        if len(seg) != 1 or len(rep) != 2 or rw.delta != 0:
            return "pattern mismatch"
        return same_endpoints()
    if rw.rule in ("PeakCommute", "DisjointCommute"):
        if len(seg) != 2 or len(rep) != 2 or rw.delta != 0:
            return "pattern mismatch"
        return same_endpoints()
    if rw.rule == "TriangleCancel":
        if rep or rw.delta != 1:
            return "pattern mismatch"
        if len(seg) == 1 and seg[0].kind == "triangle":
            return None
        if len(seg) == 2 and all(m.kind == "bypass" for m in seg):
            if not _pair_is_triangle(s, seg[0].arc, seg[1].arc):
                return "pair does not complete a triangle"
            return None
        return "pattern mismatch"
    if rw.rule == "TailRecognize":
        if rep or len(seg) != 2 or any(m.kind != "bypass" for m in seg):
            return "pattern mismatch"
        if rw.delta != 1 or not _pair_is_triangle(s, seg[0].arc, seg[1].arc):
            return "pair is not a recognized triangle"
        return None
    if rw.rule == "BraidPushToEnd":
        if len(seg) != 2 or len(rep) != 2 or rw.delta != 0:
            return "pattern mismatch"
        if seg[0].kind != "braid" or rep[1].kind != "braid":
            return "pattern mismatch"
        return same_endpoints()
    if rw.rule == "BraidToTriangles":
        if rep or any(m.kind != "braid" for m in seg):
            return "pattern mismatch"
        if rw.delta != triangle_count(s, [m.braid for m in seg]):
            return "ledger delta disagrees with the writhe"
        return None
    if rw.rule in ("TriangleInsert", "BigonEliminate", "TriangleRegionEliminate"):
        expect = {"TriangleInsert": 1}.get(rw.rule, 0)
        if rw.delta != expect:
            return "ledger delta mismatch"
        return same_endpoints()
    return "unknown rule"


def explain_certificate(seq: MoveSequence, cert) -> dict | None:
    """None when the certificate replays cleanly; otherwise the first failing
    step with its rule tag and location."""
    moves = list(seq.moves)
    initial = seq.trace()[0]
    for idx, rw in enumerate(cert):
        why = _check_rewrite(initial, moves, rw)
        if why is not None:
            return {"step": idx, "rule": rw.rule, "start": rw.start, "why": why}
        moves[rw.start : rw.end] = rw.replacement_moves()
    if moves:
        return {
            "step": len(cert),
            "rule": None,
            "start": 0,
            "why": "moves remain after replaying the certificate",
        }
    return None


def verify_certificate(seq: MoveSequence, cert) -> bool:
    return explain_certificate(seq, cert) is None
