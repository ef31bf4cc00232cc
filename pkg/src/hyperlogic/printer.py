"""Render formulas in the text grammar accepted by :mod:`hyperlogic.parser`.

Binding strength, loosest first: quantifier body, ``<->``, ``->``, ``|``, ``&``,
``U``, unary operators.  ``U`` and ``->`` associate to the right, the others to
the left.  Only the parentheses the grammar needs are emitted.
"""

from __future__ import annotations

from hyperlogic.syntax import (
    And,
    Atom,
    Const,
    Eventually,
    Exists,
    FOAtom,
    Forall,
    Formula,
    Globally,
    Iff,
    Implies,
    Leq,
    Next,
    Not,
    Or,
    Until,
)

_BINARY = {Iff: ("<->", 1, "left"), Implies: ("->", 2, "right"), Or: ("|", 3, "left"),
           And: ("&", 4, "left"), Until: ("U", 5, "right")}
_UNARY = {Not: "!", Next: "X ", Eventually: "F ", Globally: "G "}
_ATOMIC = 7


def _prec(f: Formula) -> int:
    if isinstance(f, (Exists, Forall)):
        return 0
    entry = _BINARY.get(type(f))
    if entry is not None:
        return entry[1]
    if type(f) in _UNARY:
        return 6
    return _ATOMIC


def to_text(f: Formula) -> str:
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Atom):
        return f"{f.prop}[{f.var}]"
    if isinstance(f, FOAtom):
        return f"{f.prop}({f.var})"
    if isinstance(f, Leq):
        return f"{f.left} <= {f.right}"
    if isinstance(f, Exists):
        return f"exists {f.var}. {to_text(f.body)}"
    if isinstance(f, Forall):
        return f"forall {f.var}. {to_text(f.body)}"
    op = _UNARY.get(type(f))
    if op is not None:
        arg = to_text(f.arg)
        if _prec(f.arg) < 6:
            arg = f"({arg})"
        return f"{op}{arg}"
    sym, prec, assoc = _BINARY[type(f)]
    left, right = to_text(f.left), to_text(f.right)
    lp, rp = _prec(f.left), _prec(f.right)
    if lp < prec or (lp == prec and assoc == "right") or isinstance(f.left, (Exists, Forall)):
        left = f"({left})"
    if rp < prec or (rp == prec and assoc == "left") or isinstance(f.right, (Exists, Forall)):
        right = f"({right})"
    return f"{left} {sym} {right}"
