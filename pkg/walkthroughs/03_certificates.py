"""Every normalization ships a replayable proof.

The certificate is a list of local rewrites; a verifier replays them against
the original sequence without trusting the normalizer. Corrupting any step
makes the replay fail.
"""

from bypasscalc import single_circle
from bypasscalc.arcs import classify_arc, enumerate_arcs
from bypasscalc.moves import MoveSequence, bypass, triangle_mark
from bypasscalc.normalize import (
    Rewrite,
    certificate_to_jsonl,
    explain_certificate,
    normalize,
    verify_certificate,
)
from bypasscalc.surgery import attach_triangle


def main():
    ds = single_circle()
    ot = next(
        a for a in enumerate_arcs(ds) if classify_arc(ds, a)["is_overtwisted"]
    )
    tri = attach_triangle(ds, ot)
    seq = MoveSequence(
        ds, [bypass(a) for a in tri.arcs] + [triangle_mark(ot)]
    )

    sc = normalize(seq)
    print("count:", sc.n, "retraction:", sc.r)
    print(certificate_to_jsonl(sc.certificate), end="")
    print("verifies:", verify_certificate(seq, sc.certificate))

    rw = sc.certificate[-1]
    forged = list(sc.certificate)
    forged[-1] = Rewrite(rw.rule, rw.start, rw.end, rw.delta + 1, rw.replacement)
    print("forged verifies:", verify_certificate(seq, forged))
    print("first failure:", explain_certificate(seq, forged))


if __name__ == "__main__":
    main()
