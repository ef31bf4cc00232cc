"""Finitely represented semantic objects: lassos, trace sets, Kripke structures, words."""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from functools import reduce
from math import lcm

Letter = frozenset  # frozenset[str]

DOLLAR = "dollar"
EMPTY: frozenset[str] = frozenset()


def letter(*props: str) -> frozenset[str]:
    return frozenset(props)


def _primitive_root(seq: tuple) -> tuple:
    n = len(seq)
    for d in range(1, n + 1):
        if n % d == 0 and seq[:d] * (n // d) == seq:
            return seq[:d]
    return seq


def canonical_lasso(stem: tuple, loop: tuple) -> tuple[tuple, tuple]:
    """Unique (shortest stem, primitive loop) representation of stem·loop^ω."""
    loop = _primitive_root(tuple(loop))
    stem = tuple(stem)
    while stem and stem[-1] == loop[-1]:
        stem = stem[:-1]
        loop = loop[-1:] + loop[:-1]
    return stem, loop


@dataclass(frozen=True)
class Lasso:
    """Ultimately periodic sequence ``stem · loop^ω`` of arbitrary hashable items."""

    stem: tuple
    loop: tuple

    def __post_init__(self) -> None:
        object.__setattr__(self, "stem", tuple(self.stem))
        object.__setattr__(self, "loop", tuple(self.loop))
        if not self.loop:
            raise ValueError("lasso loop must be non-empty")

    def at(self, i: int):
        s = len(self.stem)
        if i < s:
            return self.stem[i]
        return self.loop[(i - s) % len(self.loop)]

    def prefix(self, n: int) -> tuple:
        return tuple(self.at(i) for i in range(n))

    def suffix(self, j: int):
        """The lasso for positions ``j, j+1, ...``."""
        if j == 0:
            return self
        s = len(self.stem)
        if j <= s:
            return type(self)(self.stem[j:], self.loop)
        r = (j - s) % len(self.loop)
        return type(self)((), self.loop[r:] + self.loop[:r])

    def canonical(self):
        stem, loop = canonical_lasso(self.stem, self.loop)
        return type(self)(stem, loop)

    def same_word(self, other: Lasso) -> bool:
        return canonical_lasso(self.stem, self.loop) == canonical_lasso(other.stem, other.loop)


class LassoTrace(Lasso):
    """A trace: letters are frozensets of proposition names."""

    def letter_at(self, i: int) -> frozenset[str]:
        return self.at(i)

    def props(self) -> frozenset[str]:
        out: frozenset[str] = frozenset()
        for a in self.stem + self.loop:
            out |= a
        return out

    def __str__(self) -> str:
        def show(a: frozenset[str]) -> str:
            return "{" + " ".join(sorted(a)) + "}"

        return "".join(map(show, self.stem)) + " ( " + " ".join(map(show, self.loop)) + " )"


def letter_at(trace: LassoTrace, i: int) -> frozenset[str]:
    return trace.at(i)


def align(traces: Sequence[Lasso]) -> tuple[int, int]:
    """``(s, p)`` such that the tuple of lassos is periodic with period ``p`` from ``s``."""
    if not traces:
        raise ValueError("align needs at least one lasso")
    s = max(len(t.stem) for t in traces)
    p = reduce(lcm, (len(t.loop) for t in traces), 1)
    return s, p


@dataclass(frozen=True)
class TraceSet:
    """Named finite set of lasso traces over a declared alphabet."""

    traces: tuple[tuple[str, LassoTrace], ...]
    alphabet: frozenset[str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "traces", tuple(self.traces))
        object.__setattr__(self, "alphabet", frozenset(self.alphabet))
        names = [n for n, _ in self.traces]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate trace names in {names}")
        for name, t in self.traces:
            extra = t.props() - self.alphabet
            if extra:
                raise ValueError(f"trace {name} uses propositions outside the alphabet: {sorted(extra)}")

    @classmethod
    def of(cls, traces: Iterable[LassoTrace], alphabet: Iterable[str] | None = None,
           prefix: str = "t") -> TraceSet:
        traces = list(traces)
        if alphabet is None:
            alphabet = frozenset().union(*(t.props() for t in traces)) if traces else frozenset()
        return cls(tuple((f"{prefix}{i}", t) for i, t in enumerate(traces)), frozenset(alphabet))

    def __len__(self) -> int:
        return len(self.traces)

    def __iter__(self) -> Iterator[LassoTrace]:
        return (t for _, t in self.traces)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.traces)

    def get(self, name: str) -> LassoTrace:
        for n, t in self.traces:
            if n == name:
                return t
        raise KeyError(name)


@dataclass(frozen=True)
class TraceAssignment:
    """Bindings of trace variables, a uniform shift, and the most recent variable."""

    bindings: tuple[tuple[str, Lasso], ...] = ()
    shift: int = 0

    @property
    def recent(self) -> str | None:
        return self.bindings[-1][0] if self.bindings else None

    def bind(self, var: str, trace: Lasso) -> TraceAssignment:
        rest = tuple((v, t) for v, t in self.bindings if v != var)
        # a trace bound under an existing shift is already positioned at the shift
        if self.shift:
            rest = tuple((v, t.suffix(self.shift)) for v, t in rest)
        return TraceAssignment(rest + ((var, trace),), 0)

    def shifted(self, j: int) -> TraceAssignment:
        return TraceAssignment(self.bindings, self.shift + j)

    def resolved(self) -> dict[str, Lasso]:
        return {v: t.suffix(self.shift) for v, t in self.bindings}

    def __contains__(self, var: str) -> bool:
        return any(v == var for v, _ in self.bindings)


# --------------------------------------------------------------------------
# bounded and split sets


def _dollar_start(t: LassoTrace) -> int | None:
    """Start of a pure-{dollar} tail preceded only by dollar-free letters, else None."""
    dollar = letter(DOLLAR)
    if any(a != dollar for a in t.loop):
        return None
    k = len(t.stem)
    while k > 0 and t.stem[k - 1] == dollar:
        k -= 1
    if any(DOLLAR in a for a in t.stem[:k]):
        return None
    return k


def _dollar_prefix(t: LassoTrace) -> int | None:
    """Length of a leading {dollar}^b block followed only by dollar-free letters."""
    dollar = letter(DOLLAR)
    c = t.canonical()
    if all(a == dollar for a in c.loop):
        return None
    word = c.stem + c.loop
    b = 0
    while b < len(c.stem) and c.stem[b] == dollar:
        b += 1
    if any(DOLLAR in a for a in word[b:]):
        return None
    return b


def is_bounded(T: TraceSet) -> int | None:
    """The common ``b`` with every trace in (2^AP)^b · {dollar}^ω, or None."""
    starts = {_dollar_start(t) for t in T}
    if len(starts) != 1 or None in starts:
        return None
    return starts.pop()


@dataclass(frozen=True)
class SplitView:
    bound: int
    left: TraceSet
    right: TraceSet


def split_view(T: TraceSet) -> SplitView | None:
    """Left/right parts of a split set; right traces lose their {dollar}^b prefix.

    A set without any ``dollar`` is reported as not split.
    """
    if not any(DOLLAR in t.props() for t in T):
        return None
    left, right, bs = [], [], set()
    for name, t in T.traces:
        b = _dollar_start(t)
        if b is not None:
            left.append((name, t))
            bs.add(b)
            continue
        b = _dollar_prefix(t)
        if b is None:
            return None
        right.append((name, t.suffix(b)))
        bs.add(b)
    if len(bs) != 1:
        return None
    b = bs.pop()
    ordinary = T.alphabet - {DOLLAR}
    return SplitView(b, TraceSet(tuple(left), T.alphabet), TraceSet(tuple(right), ordinary))


def make_split(b: int, left: Sequence[LassoTrace], right: Sequence[LassoTrace],
               alphabet: Iterable[str]) -> TraceSet:
    """The split set whose left part is ``left`` and whose right part is ``right``.

    Left traces are given with their dollar tail; right traces without the prefix.
    """
    dollar = letter(DOLLAR)
    traces = [(f"l{i}", t) for i, t in enumerate(left)]
    traces += [(f"r{i}", LassoTrace((dollar,) * b + t.stem, t.loop)) for i, t in enumerate(right)]
    return TraceSet(tuple(traces), frozenset(alphabet) | {DOLLAR})


# --------------------------------------------------------------------------
# Kripke structures and lasso paths


class LassoPath(Lasso):
    """Ultimately periodic path given by vertex names."""

    def labels(self, K: KripkeStructure) -> LassoTrace:
        return LassoTrace(tuple(K.labels[v] for v in self.stem), tuple(K.labels[v] for v in self.loop))

    def first(self):
        return self.at(0)

    def __str__(self) -> str:
        return "[" + " ".join(map(str, self.stem)) + "](" + " ".join(map(str, self.loop)) + ")"


@dataclass(frozen=True)
class KripkeStructure:
    labels: dict[Hashable, frozenset[str]]
    edges: dict[Hashable, tuple]
    initial: Hashable
    order: tuple = field(default=())

    def __post_init__(self) -> None:
        labels = {v: frozenset(a) for v, a in self.labels.items()}
        if self.initial not in labels:
            raise ValueError(f"initial vertex {self.initial!r} is not a vertex")
        for v, succ in self.edges.items():
            if v not in labels:
                raise ValueError(f"edge from unknown vertex {v!r}")
            for w in succ:
                if w not in labels:
                    raise ValueError(f"edge to unknown vertex {w!r}")
        edges = {v: tuple(dict.fromkeys(self.edges.get(v, ()))) for v in labels}
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "edges", edges)
        if not self.order:
            object.__setattr__(self, "order", tuple(labels))
        dead = [v for v in labels if not edges[v]]
        if dead:
            raise ValueError(f"transition relation is not total: {dead!r} have no successor")

    @property
    def vertices(self) -> tuple:
        return self.order

    @property
    def alphabet(self) -> frozenset[str]:
        return frozenset().union(*self.labels.values())

    def __hash__(self) -> int:
        return hash((self.initial, tuple(self.order)))


def lasso_paths(K: KripkeStructure, start, S: int, L: int) -> list[LassoPath]:
    """All paths from ``start`` expressible with stem ≤ S and loop ≤ L, deduplicated.

    Paths are returned in canonical form (shortest stem, primitive loop), ordered
    by (stem length, loop length, vertex order).
    """
    if S < 0 or L < 1:
        raise ValueError("need S >= 0 and L >= 1")
    rank = {v: i for i, v in enumerate(K.order)}
    found: dict[tuple, LassoPath] = {}

    def loops_from(v, max_len: int) -> Iterator[tuple]:
        # simple walks v -> ... -> back to v of length <= max_len (vertices may repeat)
        def go(walk: tuple) -> Iterator[tuple]:
            if len(walk) > max_len:
                return
            last = walk[-1]
            if v in K.edges[last]:
                yield walk
            if len(walk) < max_len:
                for w in K.edges[last]:
                    yield from go(walk + (w,))

        yield from go((v,))

    def stems(k: int) -> Iterator[tuple]:
        def go(walk: tuple) -> Iterator[tuple]:
            if len(walk) == k:
                yield walk
                return
            for w in K.edges[walk[-1]]:
                yield from go(walk + (w,))

        if k == 0:
            yield ()
        else:
            yield from go((start,))

    for k in range(S + 1):
        for stem in stems(k):
            heads = K.edges[stem[-1]] if stem else (start,)
            for h in heads:
                for loop in loops_from(h, L):
                    key = canonical_lasso(stem, loop)
                    if key not in found:
                        found[key] = LassoPath(*key)

    def sort_key(p: LassoPath):
        return (len(p.stem), len(p.loop), [rank[v] for v in p.stem], [rank[v] for v in p.loop])

    return sorted(found.values(), key=sort_key)


# --------------------------------------------------------------------------
# words and stretch functions

Word = tuple  # tuple[frozenset[str], ...]


@dataclass(frozen=True)
class StretchSpec:
    """Either an explicit strictly increasing table or the uniform ``n ↦ N(n+1)``."""

    table: tuple[int, ...] | None = None
    uniform: int | None = None

    def __post_init__(self) -> None:
        if (self.table is None) == (self.uniform is None):
            raise ValueError("give exactly one of table= or uniform=")
        if self.uniform is not None and self.uniform < 1:
            raise ValueError("uniform stretch factor must be >= 1")
        if self.table is not None:
            t = tuple(self.table)
            object.__setattr__(self, "table", t)
            if any(x < 1 for x in t) or any(a >= b for a, b in zip(t, t[1:])):
                raise ValueError(f"stretch table must be strictly increasing and positive: {t}")

    def __call__(self, n: int) -> int:
        if self.uniform is not None:
            return self.uniform * (n + 1)
        if n >= len(self.table):
            raise ValueError(f"stretch table undefined at {n}")
        return self.table[n]
