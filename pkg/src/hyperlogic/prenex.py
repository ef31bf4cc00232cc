"""Prenex normal form for Boolean combinations of sentences, and the Σn/Πn class."""

from __future__ import annotations

import re

from hyperlogic.syntax import (
    EXISTS,
    FORALL,
    QUANTIFIERS,
    AlternationClass,
    And,
    Exists,
    Formula,
    FormulaError,
    HyperLTLSentence,
    Iff,
    Implies,
    Not,
    Or,
    children,
    free_vars,
    has_quantifier,
    substitute,
    walk,
)


def fresh_name(base: str, used: set[str], avoid: frozenset[str] = frozenset()) -> str:
    """``base`` itself if unused, else the first ``base_k`` in neither set."""
    if base not in used:
        return base
    stem = re.sub(r"_\d+$", "", base)
    k = 1
    while f"{stem}_{k}" in used or f"{stem}_{k}" in avoid:
        k += 1
    return f"{stem}_{k}"


def _pnf(
    f: Formula, negated: bool, used: set[str], avoid: frozenset[str]
) -> tuple[list[tuple[str, str]], Formula]:
    if not has_quantifier(f):
        return [], (Not(f) if negated else f)
    if isinstance(f, QUANTIFIERS):
        var = fresh_name(f.var, used, avoid)
        used.add(var)
        body = substitute(f.body, f.var, var) if var != f.var else f.body
        q = EXISTS if isinstance(f, Exists) else FORALL
        if negated:
            q = FORALL if q == EXISTS else EXISTS
        prefix, matrix = _pnf(body, negated, used, avoid)
        return [(q, var)] + prefix, matrix
    if isinstance(f, Not):
        return _pnf(f.arg, not negated, used, avoid)
    if isinstance(f, (And, Or)):
        lp, lm = _pnf(f.left, negated, used, avoid)
        rp, rm = _pnf(f.right, negated, used, avoid)
        flip = isinstance(f, And) == negated
        return lp + rp, (Or(lm, rm) if flip else And(lm, rm))
    if isinstance(f, Implies):
        return _pnf(Or(Not(f.left), f.right), negated, used, avoid)
    if isinstance(f, Iff):
        # the right-hand copies are renamed apart by the quantifier case
        return _pnf(And(Implies(f.left, f.right), Implies(f.right, f.left)), negated, used, avoid)
    raise FormulaError(
        "to_prenex expects a Boolean combination of sentences; "
        f"found a quantifier under {type(f).__name__}"
    )


def to_prenex(f: Formula | HyperLTLSentence) -> HyperLTLSentence:
    """Hoist the quantifiers of a ``&``/``|``/``!`` combination of closed sentences.

    Left operands' quantifiers precede right operands'; clashing variables are
    renamed ``v_1``, ``v_2``, ... in traversal order, so output is reproducible.
    """
    if isinstance(f, HyperLTLSentence):
        f = f.to_formula()
    if free_vars(f):
        raise FormulaError(f"input is not closed: free {sorted(free_vars(f))}")
    _check_components(f)
    avoid = frozenset(quantifier_vars(f))
    prefix, matrix = _pnf(f, False, set(), avoid)
    return HyperLTLSentence(tuple(prefix), matrix)


def _check_components(f: Formula) -> None:
    if isinstance(f, QUANTIFIERS):
        return
    if has_quantifier(f):
        if not isinstance(f, (Not, And, Or, Implies, Iff)):
            raise FormulaError(
                f"quantifier nested under {type(f).__name__}; not a Boolean combination of sentences"
            )
        for c in children(f):
            if free_vars(c):
                raise FormulaError("component with free variables in Boolean combination")
            _check_components(c)


def classify(sentence: HyperLTLSentence) -> AlternationClass:
    """Number of maximal quantifier blocks, and the kind of the first block."""
    blocks: list[str] = []
    for q, _ in sentence.prefix:
        if not blocks or blocks[-1] != q:
            blocks.append(q)
    if not blocks:
        return AlternationClass(0, None)
    return AlternationClass(len(blocks), "Σ" if blocks[0] == EXISTS else "Π")


def quantifier_vars(f: Formula) -> list[str]:
    return [n.var for n in walk(f) if isinstance(n, QUANTIFIERS)]
