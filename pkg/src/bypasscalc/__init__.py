"""Combinatorial calculus of bypass attachments on dividing sets of S^2."""

from .arcs import ArcSpec, InadmissibleArc, arc_code, classify_arc, enumerate_arcs
from .dividing import (
    MINUS,
    PLUS,
    DividingSet,
    InvalidDividingSet,
    enumerate_states,
    single_circle,
)
from .moves import (
    BraidMove,
    Move,
    MoveError,
    MoveSequence,
    bypass,
    braid_move,
    triangle_mark,
)
from .normalize import (
    NormalizeError,
    Rewrite,
    StableClass,
    normalize,
    stable_equiv,
    verify_certificate,
)
from .surgery import attach_bypass, attach_triangle, is_trivial_arc

__all__ = [
    "PLUS",
    "MINUS",
    "DividingSet",
    "InvalidDividingSet",
    "single_circle",
    "enumerate_states",
    "ArcSpec",
    "InadmissibleArc",
    "arc_code",
    "classify_arc",
    "enumerate_arcs",
    "attach_bypass",
    "attach_triangle",
    "is_trivial_arc",
    "Move",
    "MoveError",
    "MoveSequence",
    "BraidMove",
    "bypass",
    "braid_move",
    "triangle_mark",
    "NormalizeError",
    "Rewrite",
    "StableClass",
    "normalize",
    "stable_equiv",
    "verify_certificate",
]
