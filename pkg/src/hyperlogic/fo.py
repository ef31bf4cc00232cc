"""First-order logic over finite words and its embedding into HyperLTL.

A word ``w`` is encoded as one trace per position ``n``: the letter ``w(n)``
sits at time 0 and a marker ``o`` at time ``f(n)`` for a stretch function
``f``.  Word order becomes the order of the markers.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass

from hyperlogic.hyperltl import build_expansion
from hyperlogic.models import (
    DOLLAR,
    EMPTY,
    LassoTrace,
    StretchSpec,
    TraceAssignment,
    TraceSet,
    Word,
)
from hyperlogic.syntax import (
    EXISTS,
    FALSE,
    And,
    Atom,
    Const,
    Eventually,
    Exists,
    FOAtom,
    Forall,
    Formula,
    FormulaError,
    HyperLTLSentence,
    Iff,
    Implies,
    Leq,
    Not,
    Or,
    children,
    conj,
    disj,
    free_vars,
    has_quantifier,
    propositions,
    rebuild,
    temporal_depth,
    var_order,
)

MARKER = "o"


def eval_fo(w: Word, phi: Formula, nu: Mapping[str, int] | None = None) -> bool:
    """``(w, nu) ⊨ phi`` with quantifiers over the positions of ``w``."""
    nu = dict(nu or {})
    missing = free_vars(phi) - set(nu)
    if missing:
        raise FormulaError(f"valuation misses free variable(s) {sorted(missing)}")
    for v, i in nu.items():
        if not 0 <= i < len(w):
            raise ValueError(f"{v} ↦ {i} is not a position of a word of length {len(w)}")
    n = len(w)

    def ev(f: Formula, env: dict[str, int]) -> bool:
        if isinstance(f, FOAtom):
            return f.prop in w[env[f.var]]
        if isinstance(f, Leq):
            return env[f.left] <= env[f.right]
        if isinstance(f, Const):
            return f.value
        if isinstance(f, Not):
            return not ev(f.arg, env)
        if isinstance(f, Or):
            return ev(f.left, env) or ev(f.right, env)
        if isinstance(f, And):
            return ev(f.left, env) and ev(f.right, env)
        if isinstance(f, Implies):
            return not ev(f.left, env) or ev(f.right, env)
        if isinstance(f, Iff):
            return ev(f.left, env) == ev(f.right, env)
        if isinstance(f, Exists):
            return any(ev(f.body, {**env, f.var: i}) for i in range(n))
        if isinstance(f, Forall):
            return all(ev(f.body, {**env, f.var: i}) for i in range(n))
        raise FormulaError(f"not a first-order formula: {type(f).__name__}")

    return ev(phi, nu)


def encode_word(w: Word, f: StretchSpec, alphabet: Iterable[str] | None = None) -> TraceSet:
    """``enc(w, f)``: trace ``t{n}`` has ``w(n)`` at time 0 and ``o`` at time ``f(n)``."""
    props = set(alphabet) if alphabet is not None else set().union(*w) if w else set()
    for a in w:
        if MARKER in a or DOLLAR in a:
            raise ValueError(f"word letters may not contain {MARKER!r} or {DOLLAR!r}")
        props |= a
    traces = []
    for n, a in enumerate(w):
        k = f(n)
        stem = [frozenset(a)] + [EMPTY] * k
        stem[k] = stem[k] | {MARKER}
        traces.append(LassoTrace(tuple(stem), (EMPTY,)))
    return TraceSet.of(traces, props | {MARKER})


def _translate(f: Formula) -> Formula:
    if isinstance(f, FOAtom):
        return Atom(f.prop, f.var)
    if isinstance(f, Leq):
        return Eventually(And(Atom(MARKER, f.left), Eventually(Atom(MARKER, f.right))))
    if isinstance(f, (Exists, Forall)):
        raise FormulaError("first-order sentence is not in prenex form")
    return rebuild(f, [_translate(c) for c in children(f)])


def fo_to_hyperltl(phi: Formula) -> HyperLTLSentence:
    """Same prefix; ``a(x)`` becomes ``a[x]`` and ``x <= y`` becomes ``F(o[x] & F o[y])``."""
    prefix = []
    f = phi
    while isinstance(f, (Exists, Forall)):
        prefix.append((EXISTS if isinstance(f, Exists) else "forall", f.var))
        f = f.body
    if has_quantifier(f):
        raise FormulaError("first-order sentence is not in prenex form")
    return HyperLTLSentence(tuple(prefix), _translate(f))


# --------------------------------------------------------------------------
# stretching


@dataclass(frozen=True)
class Decoded:
    word: Word
    position: dict[str, int]  # trace name -> word position


def decode(T: TraceSet) -> Decoded:
    """Recover ``w`` from ``T = enc(w, f)``; raises if ``T`` is not an encoding."""
    marks = {}
    letters = {}
    for name, t in T.traces:
        if any(MARKER in a for a in t.loop) or any(a for a in t.loop):
            raise ValueError(f"trace {name} is not silent from some point on")
        hits = [i for i, a in enumerate(t.stem) if MARKER in a]
        if len(hits) != 1 or hits[0] == 0:
            raise ValueError(f"trace {name} needs exactly one marker after time 0")
        for i, a in enumerate(t.stem):
            if i > 0 and a - {MARKER}:
                raise ValueError(f"trace {name} has propositions after time 0")
        marks[name] = hits[0]
        letters[name] = t.stem[0] - {MARKER}
    times = sorted(marks.values())
    if len(set(times)) != len(times):
        raise ValueError("two traces share a marker position")
    rank = {m: i for i, m in enumerate(times)}
    position = {name: rank[m] for name, m in marks.items()}
    word = [None] * len(times)
    for name, n in position.items():
        word[n] = letters[name]
    return Decoded(tuple(word), position)


def stretch_set(T: TraceSet, N: int) -> TraceSet:
    """``T^(N) = enc_N(w)``; trace names are kept."""
    d = decode(T)
    enc = encode_word(d.word, StretchSpec(uniform=N), T.alphabet - {MARKER})
    by_pos = dict(enc.traces)
    return TraceSet(tuple((name, by_pos[f"t{d.position[name]}"]) for name in T.names), enc.alphabet)


def stretch_assignment(pi: TraceAssignment, T: TraceSet, N: int) -> TraceAssignment:
    """Rebind every variable of ``pi`` (bound to traces of ``T``) to the stretched trace."""
    stretched = stretch_set(T, N)
    out = []
    for v, t in pi.bindings:
        names = [n for n, u in T.traces if u == t]
        if not names:
            raise ValueError(f"{v} is bound to a trace outside the set")
        out.append((v, stretched.get(names[0])))
    return TraceAssignment(tuple(out), pi.shift)


# --------------------------------------------------------------------------
# simple form of quantifier-free formulas


def ordered_partitions(vs: Sequence[str]) -> Iterator[tuple[int, ...]]:
    """Total preorders as rank vectors (rank of each variable), lexicographically."""
    k = len(vs)
    for ranks in itertools.product(range(k), repeat=k):
        used = set(ranks)
        if used == set(range(len(used))):
            yield ranks


@dataclass(frozen=True)
class LabelClass:
    """Position-0 labels ``A`` and the order ``⪯`` of the markers (as ranks)."""

    variables: tuple[str, ...]
    labels: frozenset[tuple[str, str]]  # (prop, var)
    ranks: tuple[int, ...]

    def precedes(self, i: int, j: int) -> bool:
        return self.ranks[i] <= self.ranks[j]

    def formula(self, props: Sequence[str]) -> Formula:
        vs = self.variables
        parts: list[Formula] = []
        for v in vs:
            for a in props:
                atom = Atom(a, v)
                parts.append(atom if (a, v) in self.labels else Not(atom))
        for i, j in itertools.permutations(range(len(vs)), 2):
            order = Eventually(And(Atom(MARKER, vs[i]), Eventually(Atom(MARKER, vs[j]))))
            parts.append(order if self.precedes(i, j) else Not(order))
        return conj(parts)

    def representative(self, N: int) -> TraceAssignment:
        """Markers of rank ``r`` at time ``N(r+1)``, labels at time 0."""
        out = []
        for v, r in zip(self.variables, self.ranks):
            k = N * (r + 1)
            stem = [frozenset(a for a, u in self.labels if u == v)] + [EMPTY] * k
            stem[k] = stem[k] | {MARKER}
            out.append((v, LassoTrace(tuple(stem), (EMPTY,))))
        return TraceAssignment(tuple(out))


def label_classes(variables: Sequence[str], props: Sequence[str]) -> Iterator[LabelClass]:
    """All classes; ``A`` by bitmask ascending, then preorders in rank-vector order."""
    atoms = [(a, v) for v in variables for a in props]
    for mask in range(1 << len(atoms)):
        A = frozenset(x for i, x in enumerate(atoms) if mask >> i & 1)
        for ranks in ordered_partitions(variables):
            yield LabelClass(tuple(variables), A, ranks)


def simplify_qf(psi: Formula, props: Iterable[str] = ()) -> Formula:
    """Disjunction of the class formulas whose representative satisfies ``psi``."""
    if has_quantifier(psi):
        raise FormulaError("simplify_qf expects a quantifier-free formula")
    if DOLLAR in propositions(psi):
        raise FormulaError(f"{DOLLAR!r} is not allowed here")
    variables = var_order(psi)
    ap = sorted((set(propositions(psi)) | set(props)) - {MARKER})
    N = temporal_depth(psi) + 1
    chosen = []
    for cls in label_classes(variables, ap):
        table = build_expansion(psi, cls.representative(N))
        if table(table.formula, 0):
            chosen.append(cls.formula(ap))
    return disj(chosen) if chosen else FALSE

