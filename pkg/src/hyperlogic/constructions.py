"""Generators for the formula constructions used in the reductions.

Every generator is a pure function of its input; output text is stable.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from hyperlogic.models import DOLLAR, KripkeStructure
from hyperlogic.prenex import to_prenex
from hyperlogic.syntax import (
    EXISTS,
    And,
    Atom,
    Eventually,
    Exists,
    Forall,
    Formula,
    FormulaError,
    Globally,
    HyperLTLSentence,
    Iff,
    Implies,
    Next,
    Not,
    Or,
    Until,
    conj,
    disj,
    free_vars,
    propositions,
)

X, F, G = Next, Eventually, Globally


def _a(prop: str, var: str) -> Atom:
    return Atom(prop, var)


# --------------------------------------------------------------------------
# tilings

DIRECTIONS = ("north", "south", "east", "west")


@dataclass(frozen=True)
class Tile:
    name: str
    north: str
    south: str
    east: str
    west: str


@dataclass(frozen=True)
class TileSet:
    colors: tuple[str, ...]
    tiles: tuple[Tile, ...]
    recurring: str

    def __post_init__(self) -> None:
        if not self.tiles:
            raise ValueError("tile set is empty")
        names = [t.name for t in self.tiles]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate tile names: {names}")
        if self.recurring not in names:
            raise ValueError(f"recurring tile {self.recurring!r} is not a tile")
        for t in self.tiles:
            if t.name in ("x", "null"):
                raise ValueError(f"tile name {t.name!r} is reserved")
            for d in DIRECTIONS:
                if getattr(t, d) not in self.colors:
                    raise ValueError(f"tile {t.name}: {d} colour {getattr(t, d)!r} undeclared")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(t.name for t in self.tiles)

    def above(self, t: Tile) -> list[Tile]:
        """Tiles that may sit on top of ``t``."""
        return [u for u in self.tiles if t.north == u.south]

    def right_of(self, t: Tile) -> list[Tile]:
        return [u for u in self.tiles if t.east == u.west]


def _exactly_one(names: Sequence[str], v: str) -> Formula:
    return disj(conj([_a(n, v)] + [Not(_a(m, v)) for m in names if m != n]) for n in names)


def _vertical(ts: TileSet, v: str) -> Formula:
    return disj(And(_a(t.name, v), disj(X(_a(u.name, v)) for u in ts.above(t))) for t in ts.tiles)


def _horizontal(ts: TileSet, v1: str, v2: str) -> Formula:
    return disj(And(_a(t.name, v1), disj(_a(u.name, v2) for u in ts.right_of(t))) for t in ts.tiles)


def _one_x(v: str) -> Formula:
    return Until(Not(_a("x", v)), And(_a("x", v), X(G(Not(_a("x", v))))))


def _columns() -> tuple[Formula, Formula]:
    phi2 = And(Exists("p", _a("x", "p")),
               Forall("p1", Exists("p2", F(And(_a("x", "p1"), X(_a("x", "p2")))))))
    return _one_x_sentence(), phi2


def _one_x_sentence() -> Formula:
    return Forall("p", _one_x("p"))


def _same_column(names: Sequence[str]) -> Formula:
    same = conj(Iff(_a(n, "p1"), _a(n, "p2")) for n in names)
    return Forall("p1", Forall("p2", Implies(F(And(_a("x", "p1"), _a("x", "p2"))), G(same))))


def tiling_conjuncts(ts: TileSet) -> list[Formula]:
    """The seven closed conjuncts of the recurring-tiling sentence, in order."""
    names = ts.names
    phi1, phi2 = _columns()
    phi3 = _same_column(names)
    phi4 = Forall("p", G(_exactly_one(names, "p")))
    phi5 = Forall("p", G(_vertical(ts, "p")))
    adjacent = F(And(_a("x", "p1"), X(_a("x", "p2"))))
    phi6 = Forall("p1", Forall("p2", Implies(adjacent, G(_horizontal(ts, "p1", "p2")))))
    phi7 = Exists("p", And(_a("x", "p"), G(F(_a(ts.recurring, "p")))))
    return [phi1, phi2, phi3, phi4, phi5, phi6, phi7]


def gen_tiling(ts: TileSet) -> HyperLTLSentence:
    return to_prenex(conj(tiling_conjuncts(ts)))


def diagonal_conjuncts(ts: TileSet) -> list[Formula]:
    """Conjuncts for lower-triangle tilings over ultimately periodic traces.

    Column ``i`` is the trace with ``x`` at time ``i``; cells above the
    diagonal carry the extra tile ``null``.  Matching is only required up to
    the ``x`` point, and ``τ0`` must occur in every row.
    """
    names = ts.names
    phi1, phi2 = _columns()
    phi3 = _same_column(names + ("null",))
    phi4 = Forall("p", G(_exactly_one(names + ("null",), "p")))
    null_after = Forall("p", Until(Not(_a("null", "p")),
                                   And(And(_a("x", "p"), Not(_a("null", "p"))), X(G(_a("null", "p"))))))
    vertical = Forall("p", Until(_vertical(ts, "p"), _a("x", "p")))
    h = _horizontal(ts, "p1", "p2")
    adjacent = F(And(_a("x", "p1"), X(_a("x", "p2"))))
    horizontal = Forall("p1", Forall("p2", Implies(adjacent, Until(h, And(_a("x", "p1"), h)))))
    recurrence = Forall("p1", Exists("p2", F(And(_a("x", "p1"), _a(ts.recurring, "p2")))))
    return [phi1, phi2, phi3, phi4, null_after, vertical, horizontal, recurrence]


def gen_tiling_diagonal(ts: TileSet) -> HyperLTLSentence:
    return to_prenex(conj(diagonal_conjuncts(ts)))


# --------------------------------------------------------------------------
# a HyperCTL* sentence whose models are large


def phiset_conjuncts() -> list[Formula]:
    fbt, pset, zero, one = "fbt", "pset", "zero", "one"
    c1 = Forall("p", And(
        conj([_a(fbt, "p"), Not(_a(zero, "p")), Not(_a(one, "p")), Not(_a(pset, "p"))]),
        X(G(And(Iff(_a(pset, "p"), Not(_a(fbt, "p"))), Iff(_a(zero, "p"), Not(_a(one, "p"))))))))
    # the no-pset-successor clause is required from position 1 on: the
    # initial vertex is fbt-labelled but has the pset part as successors
    children = And(Exists("p0", X(And(_a(fbt, "p0"), _a(zero, "p0")))),
                   Exists("p1", X(And(_a(fbt, "p1"), _a(one, "p1")))))
    c2 = Forall("p", And(G(Implies(_a(fbt, "p"), children)),
                         X(G(Implies(_a(fbt, "p"), Forall("q", X(_a(fbt, "q"))))))))
    c3 = Forall("p", Implies(X(_a(fbt, "p")),
                             Exists("q", X(And(_a(pset, "q"), G(Iff(_a(zero, "p"), _a(zero, "q"))))))))
    c4 = Forall("p", G(Implies(_a(pset, "p"), Forall("q", G(Iff(_a(zero, "p"), _a(zero, "q")))))))
    return [c1, c2, c3, c4]


def gen_phiset() -> Formula:
    return conj(phiset_conjuncts())


def gen_kset_truncation(depth: int, sets: Iterable[Iterable[int]] = ()) -> KripkeStructure:
    """Finite part of the set-encoding structure.

    ``t`` is the initial ``{fbt}`` vertex; ``t0``, ``t01``, ... form the binary
    tree down to ``depth`` (leaves loop on themselves).  Set ``A`` number ``k``
    gets a pset chain ``s{k}_0 .. s{k}_m`` with ``m = max(A)+1``; the last
    vertex loops with label ``{pset, zero}``.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    labels: dict[str, frozenset[str]] = {"t": frozenset({"fbt"})}
    edges: dict[str, list[str]] = {"t": []}
    order = ["t"]
    frontier = ["t"]
    for level in range(depth):
        nxt = []
        for u in frontier:
            for bit in "01":
                name = u + bit
                labels[name] = frozenset({"fbt", "one" if bit == "1" else "zero"})
                edges[name] = []
                edges[u].append(name)
                order.append(name)
                nxt.append(name)
        frontier = nxt
    for leaf in frontier:
        edges[leaf].append(leaf)
    for k, A in enumerate(sets):
        A = sorted(set(A))
        if any(i < 0 for i in A):
            raise ValueError("sets contain naturals only")
        m = A[-1] + 1 if A else 0
        chain = [f"s{k}_{i}" for i in range(m + 1)]
        for i, name in enumerate(chain):
            labels[name] = frozenset({"pset", "one" if i in A else "zero"})
            edges[name] = [chain[i + 1]] if i + 1 < len(chain) else [name]
            order.append(name)
        edges["t"].append(chain[0])
    return KripkeStructure(labels, {v: tuple(s) for v, s in edges.items()}, "t", tuple(order))


# --------------------------------------------------------------------------
# addition and multiplication traces

OP_PROPS = ("argl", "argr", "res", "add", "mult")


def phiop_parts() -> dict[str, Formula]:
    """Closed sentences defining the arithmetic traces, grouped by role."""
    argl, argr, res, add, mult = OP_PROPS
    a = _a
    unique = conj(Until(Not(a(m, "p")), And(a(m, "p"), X(G(Not(a(m, "p")))))) for m in (argl, argr, res))
    uniqueness = Forall("p", And(Or(G(And(a(mult, "p"), Not(a(add, "p")))),
                                    G(And(a(add, "p"), Not(a(mult, "p"))))), unique))
    group1 = Forall("p", Exists("q", conj([
        Iff(a(add, "p"), a(add, "q")),
        F(And(a(argl, "p"), a(argr, "q"))),
        F(And(a(argr, "p"), a(argl, "q"))),
        F(And(a(res, "p"), a(res, "q")))])))
    group2 = And(
        Exists("p", conj([a(add, "p"), a(argl, "p"), a(argr, "p"), a(res, "p")])),
        Forall("p", Exists("q", Implies(a(add, "p"), conj([
            a(add, "q"),
            F(And(a(argl, "p"), a(argl, "q"))),
            F(And(a(argr, "p"), X(a(argr, "q")))),
            F(And(a(res, "p"), X(a(res, "q"))))])))))
    group3 = And(
        Forall("p", Implies(a(add, "p"), Iff(a(res, "p"), And(a(argl, "p"), a(argr, "p"))))),
        Forall("p", Exists("q", Implies(And(a(add, "p"), Not(a(argr, "p"))), conj([
            a(add, "q"),
            F(And(a(argl, "p"), a(argl, "q"))),
            F(And(X(a(argr, "p")), a(argr, "q"))),
            F(And(X(a(res, "p")), a(res, "q")))])))))
    group4 = And(
        Exists("p", conj([a(mult, "p"), a(argl, "p"), a(argr, "p"), a(res, "p")])),
        Forall("p", Exists("q", Exists("r", Implies(a(mult, "p"), conj([
            a(mult, "q"), a(add, "r"),
            F(conj([a(argl, "p"), a(argl, "q"), a(argl, "r")])),
            F(And(a(argr, "p"), X(a(argr, "q")))),
            F(And(a(argr, "r"), a(res, "p"))),
            F(And(a(res, "r"), a(res, "q")))]))))))
    group5 = And(
        Forall("p", Implies(a(mult, "p"), Iff(a(res, "p"), Or(a(argl, "p"), a(argr, "p"))))),
        Forall("p", Exists("q", Exists("r", Implies(And(a(mult, "p"), Not(a(argr, "p"))), conj([
            a(mult, "q"), a(add, "r"),
            F(conj([a(argl, "p"), a(argl, "q"), a(argl, "r")])),
            F(And(X(a(argr, "p")), a(argr, "q"))),
            F(And(a(res, "q"), a(argr, "r"))),
            F(And(a(res, "r"), a(res, "p")))]))))))
    return {"uniqueness": uniqueness, "group1": group1, "group2": group2,
            "group3": group3, "group4": group4, "group5": group5}


def gen_phiop() -> HyperLTLSentence:
    return to_prenex(conj(phiop_parts().values()))


# --------------------------------------------------------------------------
# bounded sets, finite-model selector, split combination


def gen_phib(alphabet: Iterable[str]) -> HyperLTLSentence:
    """Sentence true exactly on bounded sets over ``alphabet`` ∪ {dollar}."""
    props = sorted(set(alphabet) - {DOLLAR})
    d = lambda v: _a(DOLLAR, v)
    shape = And(Until(Not(d("p")), G(d("p"))),
                conj(G(Not(And(_a(a, "p"), d("p")))) for a in props))
    together = Or(F(conj([Not(d("p")), Not(d("q")), X(d("p")), X(d("q"))])),
                  And(d("p"), d("q")))
    return HyperLTLSentence((("forall", "p"), ("forall", "q")), And(shape, together))


def gen_finite_model_selector(alphabet: Iterable[str]) -> HyperLTLSentence:
    """Σ2 sentence satisfied by finite sets of traces that end in empty letters."""
    props = sorted(alphabet)
    empty = lambda v: conj(Not(_a(a, v)) for a in props)
    matrix = And(F(G(empty("p"))), G(Implies(G(empty("p")), G(empty("q")))))
    return HyperLTLSentence((("exists", "p"), ("forall", "q")), matrix)


def _relativize(phi: HyperLTLSentence, guard, matrix: Formula) -> Formula:
    body = matrix
    for q, v in reversed(phi.prefix):
        body = Exists(v, And(guard(v), body)) if q == EXISTS else Forall(v, Implies(guard(v), body))
    return body


def combine_split(phi_left: HyperLTLSentence, phi_right: HyperLTLSentence) -> HyperLTLSentence:
    """Sentence true on a split set iff its left part satisfies ``phi_left`` and
    its right part satisfies ``phi_right``."""
    for name, phi in (("left", phi_left), ("right", phi_right)):
        if DOLLAR in propositions(phi.matrix):
            raise FormulaError(f"{name} sentence already uses {DOLLAR!r}")
    if not phi_right.prefix:
        raise FormulaError("right sentence is quantifier-free: no variable to anchor the shift")
    used = [v for _, v in phi_right.prefix if v in free_vars(phi_right.matrix)]
    anchor = used[0] if used else phi_right.prefix[0][1]
    d = lambda v: _a(DOLLAR, v)
    right_matrix = Until(d(anchor), And(Not(d(anchor)), phi_right.matrix))
    right = _relativize(phi_right, lambda v: F(G(Not(d(v)))), right_matrix)
    left = _relativize(phi_left, lambda v: F(G(d(v))), phi_left.matrix)
    return to_prenex(And(left, right))


# --------------------------------------------------------------------------
# arithmetic to HyperCTL*

NAT, SET = "nat", "set"


@dataclass(frozen=True)
class ArithAtom:
    op: str  # "in" | "<" | "+" | "*"
    args: tuple[str, ...]


@dataclass(frozen=True)
class ArithNot:
    arg: object


@dataclass(frozen=True)
class ArithBin:
    op: str  # "and" | "or" | "implies"
    left: object
    right: object


@dataclass(frozen=True)
class ArithQuant:
    q: str  # "exists" | "forall"
    var: str
    sort: str  # "nat" | "set"
    body: object


@dataclass(frozen=True)
class ArithFormula:
    """``∃X1 … ∃Xn. body`` with third-order names ``third`` and a second-order body."""

    third: tuple[str, ...]
    body: object = field()

    def __post_init__(self) -> None:
        object.__setattr__(self, "third", tuple(self.third))
        if len(set(self.third)) != len(self.third):
            raise ValueError("duplicate third-order names")
        _typecheck(self.body, {}, set(self.third))


_ARITY = {"in": 2, "<": 2, "+": 3, "*": 3}


def _typecheck(node, env: dict[str, str], third: set[str]) -> None:
    if isinstance(node, ArithAtom):
        if node.op not in _ARITY or len(node.args) != _ARITY[node.op]:
            raise ValueError(f"bad atom {node.op} with {len(node.args)} arguments")
        if node.op == "in":
            x, y = node.args
            if y in third:
                if env.get(x) != SET:
                    raise ValueError(f"{x} ∈ {y}: left side must be a set variable")
            elif env.get(x) != NAT or env.get(y) != SET:
                raise ValueError(f"{x} ∈ {y}: expected a number in a set")
            return
        for v in node.args:
            if v in third:
                raise ValueError(f"third-order name {v} only allowed right of ∈")
            if env.get(v) != NAT:
                raise ValueError(f"{node.op}: {v} is not a bound number variable")
        return
    if isinstance(node, ArithNot):
        _typecheck(node.arg, env, third)
    elif isinstance(node, ArithBin):
        if node.op not in ("and", "or", "implies"):
            raise ValueError(f"unknown connective {node.op}")
        _typecheck(node.left, env, third)
        _typecheck(node.right, env, third)
    elif isinstance(node, ArithQuant):
        if node.sort not in (NAT, SET) or node.q not in ("exists", "forall"):
            raise ValueError(f"bad quantifier {node.q} {node.sort}")
        if node.var in env or node.var in third:
            raise ValueError(f"variable {node.var} bound twice")
        _typecheck(node.body, {**env, node.var: node.sort}, third)
    else:
        raise ValueError(f"not an arithmetic formula: {node!r}")


def _path(v: str) -> str:
    return f"p_{v}"


def _is_number(v: str) -> Formula:
    return X(Until(_a("zero", v), And(_a("one", v), X(G(_a("zero", v))))))


def _translate(node, third: dict[str, str], sorts: dict[str, str], counter: list[int]) -> Formula:
    if isinstance(node, ArithAtom):
        args = node.args
        if node.op == "in":
            x, y = args
            if y in third:
                return X(_a(third[y], _path(x)))
            return F(And(_a("one", _path(x)), _a("one", _path(y))))
        if node.op == "<":
            x, y = args
            return F(And(_a("one", _path(x)), X(F(_a("one", _path(y))))))
        x, y, z = args
        counter[0] += 1
        w = f"w{counter[0]}"
        kind = "add" if node.op == "+" else "mult"
        return Exists(w, conj([
            X(_a(kind, w)),
            F(And(_a("argl", w), _a("one", _path(x)))),
            F(And(_a("argr", w), _a("one", _path(y)))),
            F(And(_a("res", w), _a("one", _path(z))))]))
    if isinstance(node, ArithNot):
        return Not(_translate(node.arg, third, sorts, counter))
    if isinstance(node, ArithBin):
        l = _translate(node.left, third, sorts, counter)
        r = _translate(node.right, third, sorts, counter)
        return {"and": And, "or": Or, "implies": Implies}[node.op](l, r)
    v = _path(node.var)
    guard = X(_a("pset", v))
    if node.sort == NAT:
        guard = And(guard, _is_number(v))
    body = _translate(node.body, third, {**sorts, node.var: node.sort}, counter)
    if node.q == "exists":
        return Exists(v, And(guard, body))
    return Forall(v, Implies(guard, body))


def same_labelling(atoms: Sequence[str]) -> Formula:
    """Paths with equal 0/1 pset labelling carry the same third-order labels."""
    premise = X(G(conj([_a("pset", "p"), _a("pset", "q"), Iff(_a("one", "p"), _a("one", "q"))])))
    return Forall("p", Forall("q", Implies(premise, conj(G(Iff(_a(a, "p"), _a(a, "q"))) for a in atoms))))


def op_paths() -> Formula:
    """Arithmetic sentences restricted to the add/mult paths below the initial vertex."""
    parts = []
    for part in phiop_parts().values():
        s = to_prenex(part)
        guard = lambda v: X(Or(_a("add", v), _a("mult", v)))
        parts.append(_relativize(s, guard, X(s.matrix)))
    return conj(parts)


def arith_to_hyperctl(phi: ArithFormula) -> Formula:
    """``φ0 ∧ ψ̂`` for ``φ = ∃X1 … ∃Xn. ψ``; third-order names become propositions ``a1 .. an``."""
    third = {name: f"a{i + 1}" for i, name in enumerate(phi.third)}
    body = _translate(phi.body, third, {}, [0])
    phi0 = conj([gen_phiset(), same_labelling(list(third.values())), op_paths()])
    return And(phi0, body)
