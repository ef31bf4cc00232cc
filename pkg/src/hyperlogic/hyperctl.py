"""HyperCTL* over finite Kripke structures with a bounded lasso path domain.

Quantifiers range over :func:`lasso_paths` (stem ≤ S, loop ≤ L) starting at the
current vertex of the most recently bound path, or at the initial vertex when
nothing is bound.  ``X`` advances every bound path.  Until is exact for the
current assignment: the tuple of bound vertex lassos is periodic from
``s`` with period ``p``, so witnesses are searched in ``0 .. s+p-1``.

Two independent procedures are provided: direct recursive evaluation
(:func:`check_bounded`) and construction plus backward-induction solving of
the model-checking game (:func:`build_game`, :func:`solve_game`).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from hyperlogic.models import KripkeStructure, LassoPath, align, lasso_paths
from hyperlogic.syntax import (
    Atom,
    Const,
    Exists,
    Forall,
    Formula,
    FormulaError,
    Next,
    Not,
    Or,
    Until,
    check_scoping,
    free_vars,
    to_core,
)

VERIFIER = "Verifier"
FALSIFIER = "Falsifier"

Assignment = tuple  # tuple[tuple[str, LassoPath], ...]; last entry is the most recent


@dataclass(frozen=True)
class PathBounds:
    S: int
    L: int

    def __post_init__(self) -> None:
        if self.S < 1 or self.L < 1:
            raise ValueError("path bounds must be >= 1")

    def __str__(self) -> str:
        return f"S={self.S},L={self.L}"


def _shift(pi: Assignment, j: int) -> Assignment:
    if j == 0:
        return pi
    return tuple((v, p.suffix(j).canonical()) for v, p in pi)


def until_horizon(pi: Assignment, periods: int = 1) -> int:
    """``s + p`` of the bound vertex lassos (1 for the empty assignment).

    ``periods > 1`` searches further; it never changes a verdict and exists
    so that claim can be tested.
    """
    if not pi:
        return 1
    s, p = align([path for _, path in pi])
    return s + p * periods


def _current(pi: Assignment, K: KripkeStructure):
    return pi[-1][1].at(0) if pi else K.initial


def _prepare(phi: Formula) -> Formula:
    check_scoping(phi)
    if free_vars(phi):
        raise FormulaError(f"formula is not closed: free {sorted(free_vars(phi))}")
    return to_core(phi)


class _Paths:
    def __init__(self, K: KripkeStructure, bounds: PathBounds):
        self.K = K
        self.bounds = bounds
        self._cache: dict = {}

    def __call__(self, v) -> list[LassoPath]:
        hit = self._cache.get(v)
        if hit is None:
            hit = lasso_paths(self.K, v, self.bounds.S, self.bounds.L)
            self._cache[v] = hit
        return hit


# --------------------------------------------------------------------------
# direct semantics


def check_bounded(phi: Formula, K: KripkeStructure, bounds: PathBounds,
                  horizon_periods: int = 1) -> bool:
    """Truth of closed ``phi`` on ``K`` under the bounded path domain."""
    core = _prepare(phi)
    paths = _Paths(K, bounds)
    memo: dict[tuple[Formula, Assignment], bool] = {}

    def ev(f: Formula, pi: Assignment) -> bool:
        key = (f, pi)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if isinstance(f, Const):
            r = f.value
        elif isinstance(f, Atom):
            r = f.prop in K.labels[dict(pi)[f.var].at(0)]
        elif isinstance(f, Not):
            r = not ev(f.arg, pi)
        elif isinstance(f, Or):
            r = ev(f.left, pi) or ev(f.right, pi)
        elif isinstance(f, Next):
            r = ev(f.arg, _shift(pi, 1))
        elif isinstance(f, Until):
            r = False
            for j in range(until_horizon(pi, horizon_periods)):
                here = _shift(pi, j)
                if ev(f.right, here):
                    r = True
                    break
                if not ev(f.left, here):
                    break
        elif isinstance(f, (Exists, Forall)):
            succ = (ev(f.body, pi + ((f.var, p),)) for p in paths(_current(pi, K)))
            r = any(succ) if isinstance(f, Exists) else all(succ)
        else:
            raise FormulaError(f"unexpected node {type(f).__name__}")
        memo[key] = r
        return r

    return ev(core, ())


# --------------------------------------------------------------------------
# model-checking game


@dataclass(frozen=True)
class GameVertex:
    assignment: Assignment
    formula: Formula
    flag: int
    index: int | None = None

    @property
    def owner(self) -> str:
        f, b = self.formula, self.flag
        if self.index is not None:
            return VERIFIER if b == 1 else FALSIFIER
        if b == 0 and isinstance(f, (Or, Until, Exists)):
            return VERIFIER
        if b == 1 and isinstance(f, Forall):
            return VERIFIER
        return FALSIFIER

    def describe(self) -> str:
        parts = [f"{v}={p}" for v, p in self.assignment]
        parts.append(str(self.formula))
        parts.append(str(self.flag))
        if self.index is not None:
            parts.append(str(self.index))
        return "(" + ", ".join(parts) + ")"


@dataclass
class Game:
    vertices: list[GameVertex]
    successors: list[list[int]]
    K: KripkeStructure = field(repr=False)

    @property
    def initial(self) -> int:
        return 0

    def is_terminal(self, i: int) -> bool:
        return not self.successors[i]

    def terminal_winner(self, i: int) -> str:
        v = self.vertices[i]
        f = v.formula
        if isinstance(f, Const):
            holds = f.value
        elif isinstance(f, Atom):
            holds = f.prop in self.K.labels[dict(v.assignment)[f.var].at(0)]
        elif isinstance(f, (Exists, Forall)):
            # no path within the bounds: the player to move is stuck and loses
            return FALSIFIER if v.owner == VERIFIER else VERIFIER
        else:
            raise FormulaError(f"non-terminal formula without moves: {f}")
        return VERIFIER if holds != bool(v.flag) else FALSIFIER

    def dump(self) -> str:
        lines = []
        for i, v in enumerate(self.vertices):
            owner = "V" if v.owner == VERIFIER else "F"
            lines.append(f"#{i} owner={owner} {v.describe()}")
        for i, succ in enumerate(self.successors):
            lines.extend(f"#{i} -> #{j}" for j in succ)
        return "\n".join(lines) + "\n"

    def longest_play(self) -> int:
        memo: dict[int, int] = {}

        def go(i: int) -> int:
            if i not in memo:
                memo[i] = max((1 + go(j) for j in self.successors[i]), default=0)
            return memo[i]

        return go(self.initial)


def _moves(v: GameVertex, K: KripkeStructure, paths: _Paths) -> list[GameVertex]:
    f, pi, b = v.formula, v.assignment, v.flag
    if v.index is not None:
        j = v.index
        out = [GameVertex(_shift(pi, j), f.right, b)]
        out += [GameVertex(_shift(pi, k), f.left, b) for k in range(j)]
        return out
    if isinstance(f, (Const, Atom)):
        return []
    if isinstance(f, Not):
        return [GameVertex(pi, f.arg, 1 - b)]
    if isinstance(f, Or):
        return [GameVertex(pi, f.left, b), GameVertex(pi, f.right, b)]
    if isinstance(f, Next):
        return [GameVertex(_shift(pi, 1), f.arg, b)]
    if isinstance(f, Until):
        return [GameVertex(pi, f, b, j) for j in range(until_horizon(pi))]
    if isinstance(f, (Exists, Forall)):
        return [GameVertex(pi + ((f.var, p),), f.body, b) for p in paths(_current(pi, K))]
    raise FormulaError(f"unexpected node {type(f).__name__}")


def build_game(phi: Formula, K: KripkeStructure, bounds: PathBounds) -> Game:
    """The finite game graph reachable from ``(∅, phi, 0)``, in breadth-first order."""
    core = _prepare(phi)
    paths = _Paths(K, bounds)
    start = GameVertex((), core, 0)
    ids = {start: 0}
    vertices = [start]
    successors: list[list[int]] = []
    i = 0
    while i < len(vertices):
        succ = []
        for w in _moves(vertices[i], K, paths):
            if w not in ids:
                ids[w] = len(vertices)
                vertices.append(w)
            succ.append(ids[w])
        successors.append(succ)
        i += 1
    return Game(vertices, successors, K)


@dataclass(frozen=True)
class GameResult:
    winner: str
    strategy: dict[int, int]
    winning: tuple[str, ...] = field(repr=False, default=())

    @property
    def verifier_wins(self) -> bool:
        return self.winner == VERIFIER


def solve_game(game: Game) -> GameResult:
    """Backward induction; the strategy picks the least winning successor."""
    n = len(game.vertices)
    win: list[str | None] = [None] * n
    # successors always have larger depth in the formula measure, so a
    # reverse topological order exists; compute it iteratively
    order: list[int] = []
    state = [0] * n
    stack = [(game.initial, 0)]
    while stack:
        i, k = stack.pop()
        if k == 0:
            if state[i]:
                continue
            state[i] = 1
        succ = game.successors[i]
        if k < len(succ):
            stack.append((i, k + 1))
            j = succ[k]
            if state[j] == 0:
                stack.append((j, 0))
            elif state[j] == 1:
                raise ValueError("game graph has a cycle")
        else:
            state[i] = 2
            order.append(i)
    for i in order:
        succ = game.successors[i]
        if not succ:
            win[i] = game.terminal_winner(i)
            continue
        owner = game.vertices[i].owner
        other = FALSIFIER if owner == VERIFIER else VERIFIER
        win[i] = owner if any(win[j] == owner for j in succ) else other
    winner = win[game.initial]
    strategy = {}
    for i in order:
        succ = game.successors[i]
        if succ and game.vertices[i].owner == winner:
            good = [j for j in succ if win[j] == winner]
            strategy[i] = good[0] if good else succ[0]
    return GameResult(winner, strategy, tuple(w or "" for w in win))
