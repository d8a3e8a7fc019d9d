"""Rebuild the bundled tail-recognition table.

For every state with at most three circles, every circle-creating (type I)
arc is paired with every circle-merging (type IV) arc on the resulting
state. A pair is entered when it completes an attachment triangle whose
third arc is a genuinely trivial bypass (both bigons empty, so no circle
rides along); such a pair is worth exactly one triangle and carries a
certificate saying so. Pairs that do not complete such a triangle are left
out: the normalizer treats a missing entry as an
unsupported tail and fails loudly rather than guessing.

Usage: python scripts/regenerate_tail_table.py [output.json]
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from bypasscalc.arcs import arc_code, classify_arc, enumerate_arcs
from bypasscalc.dividing import enumerate_states
from bypasscalc.surgery import attach_triangle, is_trivial_arc


def main() -> None:
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else (
        Path(__file__).resolve().parents[1] / "src" / "bypasscalc" / "data" / "tail_table.json"
    )
    pairs = []
    for ds in enumerate_states(3):
        state_hex = ds.canonical_hex()
        for first in enumerate_arcs(ds):
            if classify_arc(ds, first)["type"] != "I":
                continue
            tri = attach_triangle(ds, first)
            anti_code = arc_code(tri.states[1], tri.arcs[1])
            third_ok = is_trivial_arc(tri.states[2], tri.arcs[2])
            mid = tri.states[1]
            for second in enumerate_arcs(mid):
                if classify_arc(mid, second)["type"] != "IV":
                    continue
                if arc_code(mid, second) != anti_code or not third_ok:
                    continue
                pairs.append(
                    {
                        "state": state_hex,
                        "first": arc_code(ds, first).hex(),
                        "second": anti_code.hex(),
                        "n": 1,
                        "certificate": [
                            {
                                "rule": "TriangleCancel",
                                "start": 0,
                                "end": 2,
                                "delta": 1,
                                "replacement": [],
                            }
                        ],
                    }
                )
    pairs.sort(key=lambda e: (e["state"], e["first"], e["second"]))
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps({"pairs": pairs}, indent=2) + "\n")
    print(f"{len(pairs)} pair entries -> {out}")


if __name__ == "__main__":
    main()
