"""Formula trees shared by HyperLTL, HyperCTL* and first-order logic over words.

All nodes are immutable.  Sugar (``And``, ``Implies``, ``Iff``, ``Eventually``,
``Globally``) is kept in the tree so that printing reproduces what was parsed;
:func:`to_core` rewrites a formula into the ``{!, |, X, U}`` core used by the
evaluators.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from typing import Union

EXISTS = "exists"
FORALL = "forall"

KEYWORDS = frozenset({"exists", "forall", "true", "false", "X", "U", "F", "G"})


class Formula:
    """Base class of every formula node."""

    __slots__ = ()

    def __str__(self) -> str:
        from hyperlogic.printer import to_text

        return to_text(self)

    # boolean operators as a small construction convenience
    def __and__(self, other: Formula) -> Formula:
        return And(self, other)

    def __or__(self, other: Formula) -> Formula:
        return Or(self, other)

    def __invert__(self) -> Formula:
        return Not(self)


@dataclass(frozen=True, slots=True)
class Const(Formula):
    value: bool


@dataclass(frozen=True, slots=True)
class Atom(Formula):
    """``prop[var]``: proposition ``prop`` on trace/path ``var``."""

    prop: str
    var: str


@dataclass(frozen=True, slots=True)
class FOAtom(Formula):
    """``prop(var)``: letter at position ``var`` contains ``prop``."""

    prop: str
    var: str


@dataclass(frozen=True, slots=True)
class Leq(Formula):
    left: str
    right: str


@dataclass(frozen=True, slots=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True, slots=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Next(Formula):
    arg: Formula


@dataclass(frozen=True, slots=True)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Eventually(Formula):
    arg: Formula


@dataclass(frozen=True, slots=True)
class Globally(Formula):
    arg: Formula


@dataclass(frozen=True, slots=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True, slots=True)
class Forall(Formula):
    var: str
    body: Formula


TRUE = Const(True)
FALSE = Const(False)

Quantifier = Union[Exists, Forall]
UNARY = (Not, Next, Eventually, Globally)
BINARY = (Or, And, Implies, Iff, Until)
QUANTIFIERS = (Exists, Forall)
TEMPORAL = (Next, Until, Eventually, Globally)


class FormulaError(ValueError):
    """Scoping or well-formedness violation."""


# --------------------------------------------------------------------------
# sentences and classes


@dataclass(frozen=True)
class HyperLTLSentence:
    """A prenex sentence: quantifier prefix followed by a quantifier-free matrix."""

    prefix: tuple[tuple[str, str], ...]
    matrix: Formula

    def __post_init__(self) -> None:
        names = [v for _, v in self.prefix]
        if len(set(names)) != len(names):
            raise FormulaError(f"duplicate quantified variable in prefix {names}")
        for q, _ in self.prefix:
            if q not in (EXISTS, FORALL):
                raise FormulaError(f"unknown quantifier {q!r}")
        if has_quantifier(self.matrix):
            raise FormulaError("matrix of a prenex sentence must be quantifier-free")
        unbound = free_vars(self.matrix) - set(names)
        if unbound:
            raise FormulaError(f"unbound variable(s): {', '.join(sorted(unbound))}")

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(v for _, v in self.prefix)

    def to_formula(self) -> Formula:
        body = self.matrix
        for q, v in reversed(self.prefix):
            body = Exists(v, body) if q == EXISTS else Forall(v, body)
        return body

    def __str__(self) -> str:
        return str(self.to_formula())


@dataclass(frozen=True)
class AlternationClass:
    """Level ``n`` of the alternation hierarchy.

    ``polarity`` is ``"Σ"`` or ``"Π"``; it is ``None`` at level 0, which is both.
    """

    level: int
    polarity: str | None

    def __post_init__(self) -> None:
        if (self.level == 0) != (self.polarity is None):
            raise ValueError("level 0 carries no polarity and vice versa")
        if self.polarity not in (None, "Σ", "Π"):
            raise ValueError(f"bad polarity {self.polarity!r}")

    @property
    def names(self) -> tuple[str, ...]:
        if self.polarity is None:
            return ("Σ0", "Π0")
        return (f"{self.polarity}{self.level}",)

    def dual(self) -> AlternationClass:
        if self.polarity is None:
            return self
        return AlternationClass(self.level, "Π" if self.polarity == "Σ" else "Σ")

    def __str__(self) -> str:
        return "/".join(self.names)


# --------------------------------------------------------------------------
# traversal helpers


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, UNARY):
        return (f.arg,)
    if isinstance(f, BINARY):
        return (f.left, f.right)
    if isinstance(f, QUANTIFIERS):
        return (f.body,)
    return ()


def walk(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def rebuild(f: Formula, kids: Iterable[Formula]) -> Formula:
    kids = tuple(kids)
    if isinstance(f, UNARY):
        return type(f)(kids[0])
    if isinstance(f, BINARY):
        return type(f)(kids[0], kids[1])
    if isinstance(f, QUANTIFIERS):
        return type(f)(f.var, kids[0])
    return f


def has_quantifier(f: Formula) -> bool:
    return any(isinstance(n, QUANTIFIERS) for n in walk(f))


def propositions(f: Formula) -> frozenset[str]:
    return frozenset(n.prop for n in walk(f) if isinstance(n, (Atom, FOAtom)))


def free_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, (Atom, FOAtom)):
        return frozenset({f.var})
    if isinstance(f, Leq):
        return frozenset({f.left, f.right})
    if isinstance(f, QUANTIFIERS):
        return free_vars(f.body) - {f.var}
    out: frozenset[str] = frozenset()
    for c in children(f):
        out |= free_vars(c)
    return out


def var_order(f: Formula) -> tuple[str, ...]:
    """Free variables in order of first occurrence (left to right)."""
    seen: dict[str, None] = {}

    def go(node: Formula, bound: frozenset[str]) -> None:
        if isinstance(node, (Atom, FOAtom)):
            if node.var not in bound:
                seen.setdefault(node.var)
        elif isinstance(node, Leq):
            for v in (node.left, node.right):
                if v not in bound:
                    seen.setdefault(v)
        elif isinstance(node, QUANTIFIERS):
            go(node.body, bound | {node.var})
        else:
            for c in children(node):
                go(c, bound)

    go(f, frozenset())
    return tuple(seen)


def check_scoping(f: Formula) -> None:
    """Reject shadowing (a variable bound twice on one branch)."""

    def go(node: Formula, bound: frozenset[str]) -> None:
        if isinstance(node, QUANTIFIERS):
            if node.var in bound:
                raise FormulaError(f"variable {node.var!r} is quantified twice on one branch")
            go(node.body, bound | {node.var})
        else:
            for c in children(node):
                go(c, bound)

    go(f, frozenset())


def substitute(f: Formula, old: str, new: str) -> Formula:
    """Rename free occurrences of variable ``old`` to ``new``."""
    if isinstance(f, Atom):
        return Atom(f.prop, new) if f.var == old else f
    if isinstance(f, FOAtom):
        return FOAtom(f.prop, new) if f.var == old else f
    if isinstance(f, Leq):
        return Leq(new if f.left == old else f.left, new if f.right == old else f.right)
    if isinstance(f, QUANTIFIERS) and f.var == old:
        return f
    return rebuild(f, (substitute(c, old, new) for c in children(f)))


# --------------------------------------------------------------------------
# connective builders; empty conjunction is ``true``, empty disjunction ``false``


def conj(parts: Iterable[Formula]) -> Formula:
    parts = list(parts)
    if not parts:
        return TRUE
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(parts: Iterable[Formula]) -> Formula:
    parts = list(parts)
    if not parts:
        return FALSE
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


# --------------------------------------------------------------------------
# normalisation and measures


def to_core(f: Formula) -> Formula:
    """Rewrite sugar into ``!``, ``|``, ``X``, ``U`` (constants and quantifiers kept).

    ``F a`` becomes ``true U a`` and ``G a`` becomes ``!(true U !a)``.
    """
    if isinstance(f, (Const, Atom, FOAtom, Leq)):
        return f
    if isinstance(f, Not):
        return Not(to_core(f.arg))
    if isinstance(f, Or):
        return Or(to_core(f.left), to_core(f.right))
    if isinstance(f, And):
        return Not(Or(Not(to_core(f.left)), Not(to_core(f.right))))
    if isinstance(f, Implies):
        return Or(Not(to_core(f.left)), to_core(f.right))
    if isinstance(f, Iff):
        a, b = to_core(f.left), to_core(f.right)
        both = Not(Or(Not(a), Not(b)))
        neither = Not(Or(a, b))
        return Or(both, neither)
    if isinstance(f, Next):
        return Next(to_core(f.arg))
    if isinstance(f, Until):
        return Until(to_core(f.left), to_core(f.right))
    if isinstance(f, Eventually):
        return Until(TRUE, to_core(f.arg))
    if isinstance(f, Globally):
        return Not(Until(TRUE, Not(to_core(f.arg))))
    if isinstance(f, Exists):
        return Exists(f.var, to_core(f.body))
    if isinstance(f, Forall):
        return Forall(f.var, to_core(f.body))
    raise TypeError(f"not a formula: {f!r}")


def temporal_depth(f: Formula) -> int:
    """Nesting depth of ``X`` and ``U``; ``F``/``G`` count as one ``U``."""
    if isinstance(f, (Next, Eventually, Globally)):
        return 1 + temporal_depth(f.arg)
    if isinstance(f, Until):
        return 1 + max(temporal_depth(f.left), temporal_depth(f.right))
    kids = children(f)
    return max((temporal_depth(c) for c in kids), default=0)


def formula_depth(f: Formula) -> int:
    """Depth counting every connective, temporal operator and quantifier."""
    kids = children(f)
    if not kids:
        return 0
    return 1 + max(formula_depth(c) for c in kids)
