"""Recursive-descent parser for the formula grammar.

Hyper atoms are written ``prop[var]``, first-order atoms ``prop(var)`` and
``x <= y``.  Operators: ``! & | -> <-> X U F G``, constants ``true``/``false``,
quantifiers ``exists v.`` / ``forall v.`` whose body extends as far right as
possible.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from hyperlogic.syntax import (
    EXISTS,
    FORALL,
    KEYWORDS,
    And,
    Atom,
    Const,
    Eventually,
    Exists,
    FOAtom,
    Forall,
    Formula,
    FormulaError,
    Globally,
    HyperLTLSentence,
    Iff,
    Implies,
    Leq,
    Next,
    Not,
    Or,
    Until,
    check_scoping,
    free_vars,
)


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at offset {pos})")
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(?P<ident>[A-Za-z0-9_]+)|(?P<sym><->|->|<=|[!&|()\[\].]))")


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None:
            rest = text[pos:]
            if rest.strip() == "":
                break
            bad = pos + len(rest) - len(rest.lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", bad)
        kind = "ident" if m.group("ident") else "sym"
        toks.append(_Tok(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(_Tok("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, fo: bool):
        self.toks = tokenize(text)
        self.i = 0
        self.fo = fo

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind != "eof"

    def expect(self, text: str) -> _Tok:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise ParseError(f"expected {text!r}, found {found!r}", self.tok.pos)
        t = self.tok
        self.i += 1
        return t

    def name(self, what: str) -> str:
        t = self.tok
        if t.kind != "ident" or t.text in KEYWORDS:
            raise ParseError(f"expected {what}, found {t.text or 'end of input'!r}", t.pos)
        self.i += 1
        return t.text

    def parse(self) -> Formula:
        f = self.expr()
        if self.tok.kind != "eof":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.pos)
        return f

    def expr(self) -> Formula:
        left = self.implication()
        while self.at("<->"):
            self.i += 1
            left = Iff(left, self.implication())
        return left

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.at("->"):
            self.i += 1
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.at("|"):
            self.i += 1
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.until()
        while self.at("&"):
            self.i += 1
            left = And(left, self.until())
        return left

    def until(self) -> Formula:
        left = self.unary()
        if self.at("U"):
            if self.fo:
                raise ParseError("temporal operator in first-order formula", self.tok.pos)
            self.i += 1
            return Until(left, self.until())
        return left

    def unary(self) -> Formula:
        t = self.tok
        if t.kind == "sym" and t.text == "!":
            self.i += 1
            return Not(self.unary())
        if t.kind == "ident" and t.text in ("X", "F", "G"):
            if self.fo:
                raise ParseError("temporal operator in first-order formula", t.pos)
            self.i += 1
            return {"X": Next, "F": Eventually, "G": Globally}[t.text](self.unary())
        if t.kind == "ident" and t.text in (EXISTS, FORALL):
            self.i += 1
            var = self.name("variable")
            self.expect(".")
            body = self.expr()
            return Exists(var, body) if t.text == EXISTS else Forall(var, body)
        return self.primary()

    def primary(self) -> Formula:
        t = self.tok
        if self.at("("):
            self.i += 1
            f = self.expr()
            self.expect(")")
            return f
        if t.kind == "ident" and t.text in ("true", "false"):
            self.i += 1
            return Const(t.text == "true")
        if t.kind == "ident" and t.text not in KEYWORDS:
            nxt = self.peek()
            if not self.fo and nxt.text == "[":
                prop = self.name("proposition")
                self.expect("[")
                var = self.name("trace variable")
                self.expect("]")
                return Atom(prop, var)
            if self.fo and nxt.text == "(":
                prop = self.name("proposition")
                self.expect("(")
                var = self.name("variable")
                self.expect(")")
                return FOAtom(prop, var)
            if self.fo and nxt.text == "<=":
                left = self.name("variable")
                self.expect("<=")
                return Leq(left, self.name("variable"))
            bracket = "(" if self.fo else "["
            raise ParseError(f"expected {bracket!r} after {t.text!r}", nxt.pos)
        raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.pos)


def parse_formula(text: str) -> Formula:
    """Parse any hyper formula (quantifiers anywhere), without scope checks."""
    return _Parser(text, fo=False).parse()


def _closed(f: Formula, allowed: frozenset[str] = frozenset()) -> Formula:
    check_scoping(f)
    unbound = free_vars(f) - allowed
    if unbound:
        raise FormulaError(f"unbound variable(s): {', '.join(sorted(unbound))}")
    return f


def parse_hyperltl(text: str) -> HyperLTLSentence:
    """Parse a prenex HyperLTL sentence."""
    f = parse_formula(text)
    prefix = []
    seen = set()
    while isinstance(f, (Exists, Forall)):
        if f.var in seen:
            raise FormulaError(f"duplicate quantified variable {f.var!r}")
        seen.add(f.var)
        prefix.append((EXISTS if isinstance(f, Exists) else FORALL, f.var))
        f = f.body
    return HyperLTLSentence(tuple(prefix), f)


def parse_hyperctl(text: str) -> Formula:
    """Parse a closed HyperCTL* formula (quantifiers may nest under any operator)."""
    return _closed(parse_formula(text))


def parse_fo(text: str, free: tuple[str, ...] = ()) -> Formula:
    """Parse a first-order formula over words; ``free`` lists permitted free variables."""
    return _closed(_Parser(text, fo=True).parse(), frozenset(free))
