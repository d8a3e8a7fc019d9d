"""Batch front door: run scenarios from JSON files.

Exit codes: 0 success, 2 validation error (bad file or bad scenario data),
3 engine error (a move or rewrite the calculus rejects), 4 iteration cap.
"""

from __future__ import annotations

import json
import random
import sys
from pathlib import Path

import click

from .arcs import InadmissibleArc, classify_arc, enumerate_arcs
from .dividing import DividingSet, InvalidDividingSet, enumerate_states, single_circle
from .moves import Move, MoveError, MoveSequence, bypass, triangle_mark
from .normalize import (
    NormalizeError,
    certificate_to_jsonl,
    normalize as run_normalize,
)
from .render import render_ascii, render_svg
from .surgery import attach_triangle, is_trivial_arc

EXIT_VALIDATION = 2
EXIT_ENGINE = 3
EXIT_CAP = 4


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load_scenario(path: str) -> MoveSequence:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        _fail(EXIT_VALIDATION, f"cannot read {path}: {exc}")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        _fail(
            EXIT_VALIDATION,
            f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}",
        )
    try:
        return MoveSequence.from_json_obj(obj)
    except (KeyError, TypeError, ValueError, InvalidDividingSet) as exc:
        _fail(EXIT_VALIDATION, f"{path}: bad scenario: {exc}")


def _trace_or_die(seq: MoveSequence):
    try:
        return seq.trace()
    except MoveError as exc:
        _fail(EXIT_ENGINE, f"move {exc.index}: {exc} [{exc.code}]")


def _trace_lines(states) -> list[str]:
    return [f"{s.canonical_hex()} {s.n_circles()}" for s in states]


@click.group()
def main():
    """Calculus of bypass attachments on dividing sets of the sphere."""


@main.command()
@click.argument("scenario", type=click.Path())
def validate(scenario):
    """Check a scenario file and replay its moves."""
    seq = _load_scenario(scenario)
    states = _trace_or_die(seq)
    click.echo(f"ok: {len(seq.moves)} moves, {len(states)} states")


@main.command()
@click.argument("scenario", type=click.Path())
@click.option("--out", type=click.Path(), default=None, help="artifact directory")
def trace(scenario, out):
    """Print one canonical code and circle count per state."""
    seq = _load_scenario(scenario)
    lines = _trace_lines(_trace_or_die(seq))
    text = "\n".join(lines) + "\n"
    click.echo(text, nl=False)
    if out:
        outdir = Path(out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "trace.txt").write_text(text)


@main.command("normalize")
@click.argument("scenario", type=click.Path())
@click.option("--out", type=click.Path(), default=None, help="artifact directory")
@click.option("--max-steps", type=int, default=None, help="rewrite cap override")
def normalize_cmd(scenario, out, max_steps):
    """Reduce the sequence to its triangle count; emit report and certificate."""
    seq = _load_scenario(scenario)
    _trace_or_die(seq)
    try:
        sc = run_normalize(seq, max_steps=max_steps)
    except NormalizeError as exc:
        code = EXIT_CAP if exc.code == "iteration_cap" else EXIT_ENGINE
        if out and exc.partial:
            outdir = Path(out)
            outdir.mkdir(parents=True, exist_ok=True)
            (outdir / "certificate.jsonl").write_text(
                certificate_to_jsonl(exc.partial)
            )
        _fail(code, f"{exc} [{exc.code}]")
    click.echo(json.dumps(sc.report()))
    if out:
        outdir = Path(out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "report.json").write_text(json.dumps(sc.report()) + "\n")
        (outdir / "certificate.jsonl").write_text(
            certificate_to_jsonl(sc.certificate)
        )


@main.command()
@click.argument("scenario", type=click.Path())
@click.option("--out", type=click.Path(), default=None, help="artifact directory")
def render(scenario, out):
    """Draw every state of the trace (SVG files, ASCII to stdout)."""
    seq = _load_scenario(scenario)
    states = _trace_or_die(seq)
    for i, s in enumerate(states):
        click.echo(f"{i}: {render_ascii(s)}")
    if out:
        outdir = Path(out)
        outdir.mkdir(parents=True, exist_ok=True)
        for i, s in enumerate(states):
            (outdir / f"state_{i:03d}.svg").write_text(render_svg(s))
            (outdir / f"state_{i:03d}.txt").write_text(render_ascii(s) + "\n")


@main.command("enumerate")
@click.option("--max-circles", type=int, default=3, show_default=True)
@click.option("--arcs/--no-arcs", default=False, help="also count admissible arcs")
def enumerate_cmd(max_circles, arcs):
    """List canonical states up to a circle bound."""
    if max_circles < 1:
        _fail(EXIT_VALIDATION, "--max-circles must be at least 1")
    for ds in enumerate_states(max_circles):
        line = f"{ds.canonical_hex()} {ds.n_circles()}"
        if arcs:
            line += f" {len(enumerate_arcs(ds))}"
        click.echo(line)


@main.command()
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--runs", type=int, default=25, show_default=True)
def fuzz(seed, runs):
    """Random closed sequences; checks that normalization is deterministic
    and counts triangles consistently."""
    rng = random.Random(seed)
    checked = failed = 0
    codes = {}
    for _ in range(runs):
        ds = single_circle()
        moves: list[Move] = []
        expected = 0
        state = ds
        for _ in range(rng.randint(0, 4)):
            kind = rng.random()
            if kind < 0.5:
                arc = rng.choice(enumerate_arcs(state))
                moves.append(triangle_mark(arc))
                state = attach_triangle(state, arc).states[3]
                expected += 1
            else:
                trivials = [
                    a for a in enumerate_arcs(state) if is_trivial_arc(state, a)
                ]
                if not trivials:
                    continue
                moves.append(bypass(rng.choice(trivials)))
        seq = MoveSequence(ds, moves)
        if seq.final().canonical_code() != seq.trace()[0].canonical_code():
            continue
        try:
            first = run_normalize(seq)
            again = run_normalize(seq)
        except NormalizeError as exc:
            failed += 1
            codes[exc.code] = codes.get(exc.code, 0) + 1
            continue
        checked += 1
        if first != again or first.n != expected:
            _fail(EXIT_ENGINE, f"fuzz mismatch at seed {seed}: {first.report()}")
    click.echo(
        json.dumps({"seed": seed, "checked": checked, "unsupported": codes})
    )
    if failed and not checked:
        sys.exit(EXIT_ENGINE)


if __name__ == "__main__":
    main()
