"""Exact HyperLTL semantics over finite sets of lasso traces.

Quantifier-free formulas are evaluated through *expansion tables*: for every
subformula and every position of the aligned lasso (stem ``s``, period ``p``)
the truth value at that position.  Positions ``j >= s + p`` wrap to
``s + (j - s) mod p``.  Until is the least fixpoint of
``e(a U b, j) = e(b, j) or (e(a, j) and e(a U b, j + 1))`` on that finite
cycle, so no unrolling bound is involved.
"""

from __future__ import annotations

import itertools
import time
from collections.abc import Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from hyperlogic.models import (
    LassoTrace,
    TraceAssignment,
    TraceSet,
    align,
    canonical_lasso,
)
from hyperlogic.syntax import (
    EXISTS,
    And,
    Atom,
    Const,
    Formula,
    FormulaError,
    HyperLTLSentence,
    Next,
    Not,
    Or,
    Until,
    conj,
    disj,
    free_vars,
    propositions,
    to_core,
)

# --------------------------------------------------------------------------
# compiled quantifier-free formulas


class Compiled:
    """Hash-consed DAG of a core quantifier-free formula.

    Node ``i`` has a kind (``const atom not or next until``), child ids and the
    sorted tuple of its free variables.
    """

    def __init__(self, f: Formula):
        self.kind: list[str] = []
        self.args: list[tuple[int, ...]] = []
        self.data: list = []
        self.fv: list[tuple[str, ...]] = []
        self.child_maps: list[tuple[tuple[int, ...], ...]] = []
        self.formula: list[Formula] = []
        self._ids: dict[Formula, int] = {}
        self.root = self._add(to_core(f))

    def _add(self, f: Formula) -> int:
        hit = self._ids.get(f)
        if hit is not None:
            return hit
        if isinstance(f, Const):
            kind, kids, data, fv = "const", (), f.value, ()
        elif isinstance(f, Atom):
            kind, kids, data, fv = "atom", (), f.prop, (f.var,)
        elif isinstance(f, Not):
            kind, kids, data = "not", (self._add(f.arg),), None
        elif isinstance(f, Or):
            kind, kids, data = "or", (self._add(f.left), self._add(f.right)), None
        elif isinstance(f, Next):
            kind, kids, data = "next", (self._add(f.arg),), None
        elif isinstance(f, Until):
            kind, kids, data = "until", (self._add(f.left), self._add(f.right)), None
        else:
            raise FormulaError(f"not a quantifier-free core formula: {type(f).__name__}")
        if kind not in ("const", "atom"):
            fv = tuple(sorted(set().union(*(self.fv[k] for k in kids))))
        maps = tuple(tuple(fv.index(v) for v in self.fv[k]) for k in kids)
        nid = len(self.kind)
        self.kind.append(kind)
        self.args.append(kids)
        self.data.append(data)
        self.fv.append(fv)
        self.child_maps.append(maps)
        self.formula.append(f)
        self._ids[f] = nid
        return nid

    def node(self, f: Formula) -> int:
        return self._ids[to_core(f)]

    def __len__(self) -> int:
        return len(self.kind)


Column = tuple[int, int, list]  # (stem, period, values over 0..s+p-1)


def _lookup(col: Column, j: int) -> bool:
    s, p, vals = col
    if j >= s + p:
        j = s + (j - s) % p
    return vals[j]


class Evaluator:
    """Per-subformula columns, cached by the traces bound to the node's free variables."""

    def __init__(self, compiled: Compiled, traces: Sequence[LassoTrace]):
        self.c = compiled
        self.traces = list(traces)
        self.cache: dict[tuple[int, tuple[int, ...]], Column] = {}

    def column(self, nid: int, key: tuple[int, ...]) -> Column:
        hit = self.cache.get((nid, key))
        if hit is not None:
            return hit
        c = self.c
        kind = c.kind[nid]
        if key:
            s, p = align([self.traces[i] for i in key])
        else:
            s, p = 0, 1
        n = s + p
        if kind == "const":
            vals = [c.data[nid]] * n
        elif kind == "atom":
            t = self.traces[key[0]]
            prop = c.data[nid]
            vals = [prop in t.at(j) for j in range(n)]
        else:
            kids = [
                self.column(k, tuple(key[i] for i in m))
                for k, m in zip(c.args[nid], c.child_maps[nid])
            ]
            if kind == "not":
                vals = [not _lookup(kids[0], j) for j in range(n)]
            elif kind == "or":
                vals = [_lookup(kids[0], j) or _lookup(kids[1], j) for j in range(n)]
            elif kind == "next":
                vals = [_lookup(kids[0], j + 1) for j in range(n)]
            else:
                a = [_lookup(kids[0], j) for j in range(n)]
                b = [_lookup(kids[1], j) for j in range(n)]
                vals = _until_fixpoint(a, b, s)
        col = (s, p, vals)
        self.cache[(nid, key)] = col
        return col

    def holds(self, nid: int, env: dict[str, int], j: int = 0) -> bool:
        """Truth of node ``nid`` at position ``j``; Boolean structure short-circuits."""
        c = self.c
        kind = c.kind[nid]
        if kind == "not":
            return not self.holds(c.args[nid][0], env, j)
        if kind == "or":
            a, b = c.args[nid]
            return self.holds(a, env, j) or self.holds(b, env, j)
        if kind == "atom":
            return c.data[nid] in self.traces[env[c.fv[nid][0]]].at(j)
        if kind == "const":
            return c.data[nid]
        key = tuple(env[v] for v in c.fv[nid])
        return _lookup(self.column(nid, key), j)


def _until_fixpoint(a: list, b: list, s: int) -> list:
    n = len(a)
    vals = [False] * n
    changed = True
    while changed:
        changed = False
        for j in range(n - 1, -1, -1):
            nxt = vals[j + 1] if j + 1 < n else vals[s]
            v = b[j] or (a[j] and nxt)
            if v != vals[j]:
                vals[j] = v
                changed = True
    return vals


# --------------------------------------------------------------------------
# expansion tables


@dataclass
class ExpansionTable:
    """Truth of every core subformula at positions ``0 .. s+p-1`` of an assignment."""

    formula: Formula
    stem: int
    period: int
    values: dict[Formula, list[bool]]
    traces: dict[str, LassoTrace] = field(repr=False)

    def __call__(self, sub: Formula, j: int) -> bool:
        vals = self.values[sub]
        if j >= self.stem + self.period:
            j = self.stem + (j - self.stem) % self.period
        return vals[j]

    @property
    def subformulas(self) -> list[Formula]:
        return list(self.values)

    def violations(self) -> list[tuple[Formula, int]]:
        """Entries breaking a consistency condition (checked pointwise, with wrap)."""
        bad = []
        n = self.stem + self.period
        for sub in self.values:
            for j in range(n):
                v = self(sub, j)
                if isinstance(sub, Const):
                    ok = v == sub.value
                elif isinstance(sub, Atom):
                    ok = v == (sub.prop in self.traces[sub.var].at(j))
                elif isinstance(sub, Not):
                    ok = v == (not self(sub.arg, j))
                elif isinstance(sub, Or):
                    ok = v == (self(sub.left, j) or self(sub.right, j))
                elif isinstance(sub, Next):
                    ok = v == self(sub.arg, j + 1)
                else:
                    ok = v == _until_by_search(self, sub, j)
                if not ok:
                    bad.append((sub, j))
        return bad


def _until_by_search(table: ExpansionTable, sub: Until, j: int) -> bool:
    # a witness, if any, occurs before the state at j repeats
    limit = max(j, table.stem) + table.period
    for k in range(j, limit):
        if table(sub.right, k):
            return True
        if not table(sub.left, k):
            return False
    return False


def build_expansion(psi: Formula, assignment: TraceAssignment) -> ExpansionTable:
    """Expansion table of quantifier-free ``psi`` under ``assignment``."""
    missing = free_vars(psi) - {v for v, _ in assignment.bindings}
    if missing:
        raise FormulaError(f"unbound variable(s): {', '.join(sorted(missing))}")
    traces = assignment.resolved()
    names = sorted(traces)
    compiled = Compiled(psi)
    ev = Evaluator(compiled, [traces[v] for v in names])
    env = {v: i for i, v in enumerate(names)}
    s, p = align([traces[v] for v in names]) if names else (0, 1)
    values = {}
    for nid in range(len(compiled)):
        key = tuple(env[v] for v in compiled.fv[nid])
        col = ev.column(nid, key)
        values[compiled.formula[nid]] = [_lookup(col, j) for j in range(s + p)]
    return ExpansionTable(to_core(psi), s, p, values, traces)


# --------------------------------------------------------------------------
# sentences: miniscoped evaluation plan


@dataclass(frozen=True)
class _Quant:
    q: str
    var: str
    body: object


@dataclass(frozen=True)
class _Junction:
    op: str  # "and" | "or"
    parts: tuple


@dataclass(frozen=True)
class _Leaf:
    matrix: Formula


def _flatten(f: Formula, op: type) -> list[Formula]:
    if isinstance(f, op):
        return _flatten(f.left, op) + _flatten(f.right, op)
    return [f]


def miniscope(prefix: Sequence[tuple[str, str]], matrix: Formula):
    """Split a prenex sentence into independent pieces (valid on non-empty sets).

    Conjuncts/disjuncts of the matrix that share no variable of ``prefix`` are
    evaluated as separate sentences; quantifiers over unused variables vanish.
    """
    pvars = [v for _, v in prefix]
    for op, name, join in ((And, "and", conj), (Or, "or", disj)):
        parts = _flatten(matrix, op)
        if len(parts) < 2:
            continue
        groups: list[tuple[set[str], list[Formula]]] = []
        for part in parts:
            vs = set(free_vars(part)) & set(pvars)
            merged = [g for g in groups if g[0] & vs]
            rest = [g for g in groups if not g[0] & vs]
            new_vars = set(vs).union(*(g[0] for g in merged))
            new_parts = [x for g in merged for x in g[1]] + [part]
            if not vs:
                groups.append((set(), [part]))
                continue
            groups = rest + [(new_vars, new_parts)]
        if len(groups) > 1:
            # keep the original left-to-right order of the first part of each group
            order = {id(p): i for i, p in enumerate(parts)}
            groups.sort(key=lambda g: min(order[id(x)] for x in g[1]))
            subs = []
            for vs, ps in groups:
                ps = sorted(ps, key=lambda x: order[id(x)])
                subs.append(miniscope([(q, v) for q, v in prefix if v in vs], join(ps)))
            return _Junction(name, tuple(subs))
    if not prefix:
        return _Leaf(matrix)
    (q, v), rest = prefix[0], prefix[1:]
    if v not in free_vars(matrix):
        return miniscope(rest, matrix)
    return _Quant(q, v, miniscope(rest, matrix))


class SentenceChecker:
    """Evaluates one sentence on many trace sets, sharing compiled matrices."""

    def __init__(self, sentence: HyperLTLSentence):
        self.sentence = sentence
        self.plan = miniscope(sentence.prefix, sentence.matrix)
        self._compiled: dict[int, Compiled] = {}
        self._index(self.plan)

    def _index(self, node) -> None:
        if isinstance(node, _Leaf):
            self._compiled[id(node)] = Compiled(node.matrix)
        elif isinstance(node, _Quant):
            self._index(node.body)
        else:
            for p in node.parts:
                self._index(p)

    def pieces(self) -> list:
        """Top-level conjunctive pieces of the plan."""
        if isinstance(self.plan, _Junction) and self.plan.op == "and":
            return list(self.plan.parts)
        return [self.plan]

    def check(self, traces: Sequence[LassoTrace], node=None) -> bool:
        evs = {k: Evaluator(c, traces) for k, c in self._compiled.items()}
        idx = range(len(traces))
        return self._eval(self.plan if node is None else node, {}, evs, idx)

    def _eval(self, node, env: dict[str, int], evs: dict, idx) -> bool:
        if isinstance(node, _Leaf):
            ev = evs[id(node)]
            return ev.holds(ev.c.root, env)
        if isinstance(node, _Junction):
            parts = (self._eval(p, env, evs, idx) for p in node.parts)
            return all(parts) if node.op == "and" else any(parts)
        inner = (self._eval(node.body, {**env, node.var: i}, evs, idx) for i in idx)
        return any(inner) if node.q == EXISTS else all(inner)


def check(phi: HyperLTLSentence, T: TraceSet) -> bool:
    """``T ⊨ phi`` under the exact semantics."""
    if len(T) == 0:
        raise ValueError("empty trace set: quantification over no traces is rejected")
    missing = propositions(phi.matrix) - T.alphabet
    if missing:
        raise ValueError(f"alphabet mismatch: {sorted(missing)} not declared in the trace set")
    return SentenceChecker(phi).check(list(T))


# --------------------------------------------------------------------------
# bounded satisfiability search


@dataclass(frozen=True)
class SearchBudget:
    traces: int
    stem: int
    loop: int
    seconds: float | None = None

    def __post_init__(self) -> None:
        if self.traces < 1 or self.stem < 1 or self.loop < 1:
            raise ValueError("budget components must be >= 1")


@dataclass(frozen=True)
class SatResult:
    status: str  # "FOUND" | "EXHAUSTED"
    model: TraceSet | None = None
    examined: int = 0
    timed_out: bool = False

    @property
    def found(self) -> bool:
        return self.status == "FOUND"


def letter_mask(a: frozenset[str], alphabet: Sequence[str]) -> int:
    return sum(1 << i for i, p in enumerate(alphabet) if p in a)


def trace_key(t: LassoTrace, alphabet: Sequence[str]) -> tuple:
    """Enumeration order: size, loop length, then letter bitmasks of stem and loop."""
    return (
        len(t.stem) + len(t.loop),
        len(t.loop),
        tuple(letter_mask(a, alphabet) for a in t.stem),
        tuple(letter_mask(a, alphabet) for a in t.loop),
    )


def candidate_traces(alphabet: Sequence[str], S: int, L: int) -> list[LassoTrace]:
    """Canonical lassos with stem ≤ S, loop ≤ L, sorted by :func:`trace_key`."""
    letters = [frozenset(p for i, p in enumerate(alphabet) if m >> i & 1)
               for m in range(1 << len(alphabet))]
    seen = set()
    out = []
    for s in range(S + 1):
        for l in range(1, L + 1):
            for stem in itertools.product(letters, repeat=s):
                for loop in itertools.product(letters, repeat=l):
                    key = canonical_lasso(stem, loop)
                    if key not in seen:
                        seen.add(key)
                        out.append(LassoTrace(*key))
    out.sort(key=lambda t: trace_key(t, alphabet))
    return out


def _combinations_by_size(sizes: list[int], k: int, total: int) -> Iterator[tuple[int, ...]]:
    """Increasing index tuples of length k whose sizes sum to ``total``, lexicographically."""

    def go(start: int, k: int, total: int, acc: tuple) -> Iterator[tuple[int, ...]]:
        if k == 0:
            if total == 0:
                yield acc
            return
        for i in range(start, len(sizes)):
            if sizes[i] * k > total:
                # sizes are non-decreasing: every later choice is at least as large
                break
            yield from go(i + 1, k - 1, total - sizes[i], acc + (i,))

    yield from go(0, k, total, ())


def enumerate_sets(cands: list[LassoTrace], K: int) -> Iterator[tuple[int, ...]]:
    """Index sets of at most K candidates ordered by (total size, count, sorted keys)."""
    sizes = [len(t.stem) + len(t.loop) for t in cands]
    if not sizes:
        return
    top = sum(sorted(sizes)[-K:])
    for total in range(1, top + 1):
        for k in range(1, K + 1):
            yield from _combinations_by_size(sizes, k, total)


def _universal_arity(node) -> tuple[int, list[str]] | None:
    vars_ = []
    while isinstance(node, _Quant):
        if node.q == EXISTS:
            return None
        vars_.append(node.var)
        node = node.body
    if not isinstance(node, _Leaf):
        return None
    return len(vars_), vars_


def _check_chunk(args) -> list[bool]:
    sentence, traces, chunk = args
    checker = SentenceChecker(sentence)
    return [checker.check([traces[i] for i in combo]) for combo in chunk]


def sat_enum(phi: HyperLTLSentence, budget: SearchBudget, jobs: int = 1,
             chunk_size: int = 256) -> SatResult:
    """Search finite lasso models within ``budget``; the first model in order is returned.

    Only the propositions of ``phi`` are used.  Universal single-variable and
    two-variable pieces of the sentence are subset-closed, so candidates and
    pairs violating them are discarded before sets are formed.  EXHAUSTED never
    means unsatisfiable.
    """
    alphabet = sorted(propositions(phi.matrix))
    checker = SentenceChecker(phi)
    cands = candidate_traces(alphabet, budget.stem, budget.loop)

    unary, binary = [], []
    for piece in checker.pieces():
        ar = _universal_arity(piece)
        if ar is None:
            continue
        if ar[0] == 1:
            unary.append(piece)
        elif ar[0] == 2:
            binary.append(piece)
    keep = [t for t in cands if all(checker.check([t], p) for p in unary)]
    bad_pairs = set()
    if binary:
        for i, j in itertools.combinations_with_replacement(range(len(keep)), 2):
            pair = [keep[i], keep[j]] if i != j else [keep[i]]
            if not all(checker.check(pair, p) for p in binary):
                bad_pairs.add((i, j))

    def admissible(combo: tuple[int, ...]) -> bool:
        if not bad_pairs:
            return True
        return not any((a, b) in bad_pairs for a, b in itertools.combinations_with_replacement(combo, 2))

    deadline = None if budget.seconds is None else time.monotonic() + budget.seconds
    examined = 0

    def model(combo) -> TraceSet:
        return TraceSet.of([keep[i] for i in combo], alphabet)

    stream = (c for c in enumerate_sets(keep, budget.traces) if admissible(c))
    if jobs <= 1:
        for combo in stream:
            if deadline is not None and time.monotonic() > deadline:
                return SatResult("EXHAUSTED", examined=examined, timed_out=True)
            examined += 1
            if checker.check([keep[i] for i in combo]):
                return SatResult("FOUND", model(combo), examined)
        return SatResult("EXHAUSTED", examined=examined)

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        while True:
            batch = list(itertools.islice(stream, chunk_size * jobs))
            if not batch:
                return SatResult("EXHAUSTED", examined=examined)
            if deadline is not None and time.monotonic() > deadline:
                return SatResult("EXHAUSTED", examined=examined, timed_out=True)
            chunks = [batch[i:i + chunk_size] for i in range(0, len(batch), chunk_size)]
            results = pool.map(_check_chunk, [(phi, keep, ch) for ch in chunks])
            flat = [r for rs in results for r in rs]
            for combo, ok in zip(batch, flat):
                examined += 1
                if ok:
                    return SatResult("FOUND", model(combo), examined)
