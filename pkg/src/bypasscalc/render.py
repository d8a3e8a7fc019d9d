"""Deterministic diagrams of dividing sets.

A dividing set on the sphere is a tree of signed faces; flattened into the
plane from a fixed root face it becomes a nesting of circles. Subtrees are
ordered by their canonical codes, so identical inputs always produce byte
identical output.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dividing import PLUS, DividingSet

_PAD = 0.35
_SIGN = {PLUS: "+", -1: "-"}


@dataclass
class _Node:
    circle: str | None  # None for the root face
    sign: int           # sign of the face inside this circle
    children: list
    code: str = ""
    radius: float = 0.0
    x: float = 0.0
    y: float = 0.0


def _tree(ds: DividingSet) -> _Node:
    adj = ds.adjacency()

    def build(face: str, via: str | None) -> list[_Node]:
        out = []
        for circle, neighbor in adj[face]:
            if circle == via:
                continue
            out.append(
                _Node(circle, ds.faces[neighbor], build(neighbor, circle))
            )
        return out

    # root at the face giving the smallest code, so relabelings cannot
    # change the picture; positive faces win ties
    candidates = sorted(ds.faces, key=lambda f: (ds.faces[f] != PLUS, f))
    best = None
    for face in candidates:
        node = _Node(None, ds.faces[face], build(face, None))
        _canonize(node)
        key = (node.sign != PLUS, node.code)
        if best is None or key < best[0]:
            best = (key, node)
    return best[1]


def _canonize(node: _Node) -> str:
    for child in node.children:
        _canonize(child)
    node.children.sort(key=lambda c: c.code)
    node.code = f"{_SIGN[node.sign]}({''.join(c.code for c in node.children)})"
    return node.code


def _layout(node: _Node):
    for child in node.children:
        _layout(child)
    if not node.children:
        node.radius = 1.0
        return
    width = sum(2 * c.radius for c in node.children)
    width += _PAD * (len(node.children) + 1)
    x = -width / 2 + _PAD
    for c in node.children:
        c.x = x + c.radius
        c.y = 0.0
        x += 2 * c.radius + _PAD
    node.radius = width / 2 + _PAD


def render_ascii(ds: DividingSet) -> str:
    """One-line nesting picture; each parenthesis pair is a circle."""
    return _tree(ds).code


def render_svg(ds: DividingSet) -> str:
    root = _tree(ds)
    _layout(root)
    scale = 40.0
    size = 2 * (root.radius + _PAD) * scale
    half = size / 2
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size:.2f}" '
        f'height="{size:.2f}" viewBox="0 0 {size:.2f} {size:.2f}">',
        f'<rect width="{size:.2f}" height="{size:.2f}" fill="white"/>',
        f'<text x="8.00" y="20.00" font-size="16" '
        f'font-family="monospace">{_SIGN[root.sign]}</text>',
    ]

    def emit(node: _Node, cx: float, cy: float):
        for c in node.children:
            x, y = cx + c.x * scale, cy + c.y * scale
            parts.append(
                f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{c.radius * scale:.2f}" '
                f'fill="none" stroke="black" stroke-width="1.5"/>'
            )
            parts.append(
                f'<text x="{x:.2f}" y="{y + 5:.2f}" font-size="14" '
                f'font-family="monospace" text-anchor="middle">'
                f"{_SIGN[c.sign]}</text>"
                if not c.children
                else f'<text x="{x:.2f}" y="{y - (c.radius * scale) + 16:.2f}" '
                f'font-size="14" font-family="monospace" '
                f'text-anchor="middle">{_SIGN[c.sign]}</text>'
            )
            emit(c, x, y)

    emit(root, half, half)
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
