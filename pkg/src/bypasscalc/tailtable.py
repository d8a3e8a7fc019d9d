"""Lookup table for recognizing terminal attachment pairs as triangles.

Each entry keys a state and a pair of arc codes (a circle-creating arc and
the circle-merging arc following it) to the triangle count the pair is worth,
together with a replayable certificate. The table covers states with at most
three circles and is regenerated offline by scripts/regenerate_tail_table.py;
the BYPASS_TAIL_TABLE environment variable overrides the bundled file.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

_DEFAULT_PATH = Path(__file__).parent / "data" / "tail_table.json"
_CACHE: dict[str, dict] = {}


def table_path() -> Path:
    override = os.environ.get("BYPASS_TAIL_TABLE")
    return Path(override) if override else _DEFAULT_PATH


def load_tail_table() -> dict[tuple[str, str, str], dict]:
    """(state canonical hex, first arc code hex, second arc code hex) ->
    {"n": int, "certificate": [rewrite objects]}."""
    path = str(table_path())
    if path not in _CACHE:
        with open(path) as fh:
            raw = json.load(fh)
        table = {}
        for entry in raw["pairs"]:
            key = (entry["state"], entry["first"], entry["second"])
            table[key] = {"n": entry["n"], "certificate": entry["certificate"]}
        _CACHE[path] = table
    return _CACHE[path]


def lookup_pair(state_hex: str, first_hex: str, second_hex: str) -> dict | None:
    return load_tail_table().get((state_hex, first_hex, second_hex))
