import itertools
import time

import pytest

from hyperlogic.constructions import (
    OP_PROPS,
    ArithAtom,
    ArithFormula,
    ArithQuant,
    Tile,
    TileSet,
    arith_to_hyperctl,
    combine_split,
    diagonal_conjuncts,
    gen_finite_model_selector,
    gen_kset_truncation,
    gen_phib,
    gen_phiop,
    gen_phiset,
    gen_tiling,
    gen_tiling_diagonal,
    phiop_parts,
    phiset_conjuncts,
    same_labelling,
    tiling_conjuncts,
)
from hyperlogic.formats import parse_arith
from hyperlogic.hyperctl import PathBounds, check_bounded
from hyperlogic.hyperltl import SearchBudget, check, sat_enum
from hyperlogic.models import (
    DOLLAR,
    KripkeStructure,
    LassoTrace,
    TraceSet,
    canonical_lasso,
    is_bounded,
    lasso_paths,
    letter,
    make_split,
    split_view,
)
from hyperlogic.parser import parse_hyperltl
from hyperlogic.prenex import to_prenex
from hyperlogic.syntax import (
    Atom,
    Eventually,
    FormulaError,
    Globally,
    Not,
    propositions,
    walk,
)

L, E = letter, letter()
ONE_TILE = TileSet(("c",), (Tile("T0", "c", "c", "c", "c"),), "T0")
STRIPES = TileSet(("c", "d"), (Tile("A", "c", "c", "c", "c"), Tile("B", "c", "c", "d", "d")), "A")


def grid(n, column_tile=lambda i: "T0", props=("x", "T0")):
    """Column i: x at time i, one tile everywhere."""
    out = []
    for i in range(n):
        tile = column_tile(i)
        stem = tuple(L(tile, "x") if j == i else L(tile) for j in range(i + 1))
        out.append(LassoTrace(stem, (L(tile),)))
    return TraceSet.of(out, props)


# --------------------------------------------------------------------------
# tilings


def test_tiling_alphabet_and_compatibility():
    phi = gen_tiling(STRIPES)
    assert propositions(phi.matrix) == {"x", "A", "B"}
    conj5 = tiling_conjuncts(ONE_TILE)[4]
    assert str(conj5) == "forall p. G (T0[p] & X T0[p])"
    assert str(tiling_conjuncts(ONE_TILE)[5]).endswith("G (T0[p1] & T0[p2])")


def test_incompatible_tiles_give_false_disjunctions():
    ts = TileSet(("c", "d"), (Tile("A", "c", "c", "c", "d"), Tile("B", "c", "c", "c", "d")), "A")
    phi6 = tiling_conjuncts(ts)[5]
    assert "(A[p1] & false | B[p1] & false)" in str(phi6)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_grid_prefix_models(n):
    got = [check(to_prenex(c), grid(n)) for c in tiling_conjuncts(ONE_TILE)]
    assert got == [True, False, True, True, True, True, True]


def test_mismatched_columns_violate_horizontal_matching():
    T = grid(3, lambda i: "A" if i == 0 else "B", ("x", "A", "B"))
    got = [check(to_prenex(c), T) for c in tiling_conjuncts(STRIPES)]
    assert got[5] is False
    assert got[4] is True and got[3] is True


def test_tiling_search_exhausts():
    t = time.monotonic()
    assert sat_enum(gen_tiling(ONE_TILE), SearchBudget(4, 4, 2)).status == "EXHAUSTED"
    assert time.monotonic() - t < 30


def test_diagonal_tiling():
    phi = gen_tiling_diagonal(ONE_TILE)
    assert propositions(phi.matrix) == propositions(gen_tiling(ONE_TILE).matrix) | {"null"}
    conjs = diagonal_conjuncts(ONE_TILE)
    assert str(conjs[-1]) == "forall p1. exists p2. F (x[p1] & T0[p2])"
    # lower triangle with null above the diagonal
    cols = [LassoTrace(tuple(L("T0", "x") if j == i else L("T0") for j in range(i + 1)), (L("null"),))
            for i in range(3)]
    T = TraceSet.of(cols, ["x", "T0", "null"])
    got = [check(to_prenex(c), T) for c in conjs]
    assert got == [True, False, True, True, True, True, True, True]


# --------------------------------------------------------------------------
# set encoding


MIRROR = KripkeStructure(
    {"vI": L("fbt"), "f0": L("fbt", "zero"), "f1": L("fbt", "one"), "s0": L("pset", "zero"),
     "s1": L("pset", "one")},
    {"vI": ("f0", "f1", "s0", "s1"), "f0": ("f0", "f1"), "f1": ("f0", "f1"), "s0": ("s0", "s1"),
     "s1": ("s0", "s1")},
    "vI")


def test_phiset_shape_and_examples():
    assert len(phiset_conjuncts()) == 4
    one = KripkeStructure({"v": L("a")}, {"v": ("v",)}, "v")
    assert [check_bounded(c, one, PathBounds(1, 2)) for c in phiset_conjuncts()] == [False, True, True, True]
    assert not check_bounded(gen_phiset(), one, PathBounds(1, 2))
    assert [check_bounded(c, MIRROR, PathBounds(1, 2)) for c in phiset_conjuncts()] == [True, True, True, False]


def test_kset_truncation():
    K = gen_kset_truncation(1)
    assert len(K.vertices) == 3 and all("fbt" in K.labels[v] for v in K.vertices)
    K = gen_kset_truncation(2, [{0}])
    assert all(K.edges[v] for v in K.vertices)
    chains = [p.labels(K) for p in lasso_paths(K, "s0_0", 2, 1)]
    assert LassoTrace((L("pset", "one"),), (L("pset", "zero"),)) in chains
    c1 = phiset_conjuncts()[0]
    # at S=1 no lasso from t fits: the tree's only cycles sit at depth 2
    assert check_bounded(c1, K, PathBounds(1, 2))
    assert lasso_paths(K, "t", 1, 2) == []
    assert [check_bounded(c, K, PathBounds(2, 1)) for c in phiset_conjuncts()] == [True, False, False, True]
    with pytest.raises(ValueError):
        gen_kset_truncation(0)


# --------------------------------------------------------------------------
# arithmetic traces


def op_trace(kind, n1, n2, n3):
    stem = []
    for i in range(max(n1, n2, n3) + 1):
        a = {kind}
        a |= {"argl"} if i == n1 else set()
        a |= {"argr"} if i == n2 else set()
        a |= {"res"} if i == n3 else set()
        stem.append(frozenset(a))
    return LassoTrace(tuple(stem), (L(kind),))


VALID = ([op_trace("add", i, j, i + j) for i in range(7) for j in range(7) if i + j <= 6]
         + [op_trace("mult", i, j, i * j) for i in range(7) for j in range(7) if i * j <= 6])


def test_phiop_alphabet():
    assert propositions(gen_phiop().matrix) == set(OP_PROPS)


def test_phiop_on_bounded_valid_set():
    T = TraceSet.of(VALID, OP_PROPS)
    got = {k: check(to_prenex(v), T) for k, v in phiop_parts().items()}
    assert got == {"uniqueness": True, "group1": True, "group2": False, "group3": True,
                   "group4": False, "group5": True}


def test_phiop_corrupt_addition():
    T = TraceSet.of(VALID + [op_trace("add", 2, 3, 6)], OP_PROPS)
    assert not check(to_prenex(phiop_parts()["group3"]), T)


def test_phiop_single_fact():
    T = TraceSet.of([op_trace("add", 2, 3, 5)], OP_PROPS)
    parts = phiop_parts()
    assert check(to_prenex(parts["uniqueness"]), T)
    assert check(to_prenex(parts["group3"].left), T)
    two_argl = LassoTrace((L("add", "argl"), L("add", "argl", "argr", "res")), (L("add"),))
    assert not check(to_prenex(parts["uniqueness"]), TraceSet.of([two_argl], OP_PROPS))


# --------------------------------------------------------------------------
# bounded sets, selector, split combination


def _sets_over(letters, max_stem, max_loop, max_traces):
    cands = sorted({canonical_lasso(s, l) for n in range(max_stem + 1) for m in range(1, max_loop + 1)
                    for s in itertools.product(letters, repeat=n) for l in itertools.product(letters, repeat=m)},
                   key=str)
    for k in range(1, max_traces + 1):
        yield from itertools.combinations([LassoTrace(*c) for c in cands], k)


def test_phib_shape():
    phi = gen_phib(["a"])
    assert phi.prefix == (("forall", "p"), ("forall", "q"))
    assert str(phi.matrix.left) == "!dollar[p] U G dollar[p] & G !(a[p] & dollar[p])"


def test_phib_characterizes_bounded_sets():
    letters = [E, L("a"), L(DOLLAR), L("a", DOLLAR)]
    phi = gen_phib(["a"])
    n = 0
    for ts in _sets_over(letters, 2, 1, 2):
        T = TraceSet.of(ts, ["a", DOLLAR])
        assert check(phi, T) == (is_bounded(T) is not None), ts
        n += 1
    assert n == 2080


def test_finite_model_selector():
    psi = gen_finite_model_selector(["a"])
    assert check(psi, TraceSet.of([LassoTrace((L("a"),), (E,))], ["a"]))
    assert not check(psi, TraceSet.of([LassoTrace((), (L("a"),))], ["a"]))


def test_combine_split_examples():
    psi = combine_split(parse_hyperltl("exists p. a[p]"), parse_hyperltl("exists q. b[q]"))
    left = [LassoTrace((L("a"),), (L(DOLLAR),))]
    assert check(psi, make_split(1, left, [LassoTrace((), (L("b"),))], ["a", "b"]))
    assert not check(psi, make_split(1, left, [LassoTrace((), (L("a"),))], ["a", "b"]))
    with pytest.raises(FormulaError):
        combine_split(parse_hyperltl("exists p. a[p]"), parse_hyperltl("true"))
    with pytest.raises(FormulaError):
        combine_split(parse_hyperltl("exists p. dollar[p]"), parse_hyperltl("exists q. a[q]"))


PAIRS = [
    ("exists p. a[p]", "exists q. a[q]"),
    ("forall p. a[p]", "exists q. G a[q]"),
    ("exists p. forall q. a[p] | !a[q]", "forall q. exists r. F (a[q] & X a[r])"),
    ("forall p. forall q. (a[p] <-> a[q])", "exists q. forall r. X a[r] -> a[q]"),
]


def test_combine_split_guards():
    for l, r in PAIRS:
        pl, pr = parse_hyperltl(l), parse_hyperltl(r)
        psi = combine_split(pl, pr)
        subs = set(walk(psi.matrix))
        right = [v for v in psi.variables if Eventually(Globally(Not(Atom(DOLLAR, v)))) in subs]
        left = [v for v in psi.variables if Eventually(Globally(Atom(DOLLAR, v))) in subs]
        assert len(right) == len(pr.prefix) and len(left) == len(pl.prefix)
        assert set(right) | set(left) == set(psi.variables)


@pytest.mark.parametrize("pair", PAIRS[:2])
def test_combine_split_law(pair):
    pl, pr = map(parse_hyperltl, pair)
    psi = combine_split(pl, pr)
    lets = [E, L("a")]
    rights = [LassoTrace(*c) for c in sorted({canonical_lasso(s, l) for n in range(2) for m in (1, 2)
                                              for s in itertools.product(lets, repeat=n)
                                              for l in itertools.product(lets, repeat=m)}, key=str)]
    for b in range(3):
        lefts = [LassoTrace(w, (L(DOLLAR),)) for w in itertools.product(lets, repeat=b)]
        for kl, kr in itertools.product((1, 2), repeat=2):
            for ls in itertools.combinations(lefts, kl):
                for rs in itertools.combinations(rights, kr):
                    v = split_view(make_split(b, ls, rs, ["a"]))
                    expected = check(pl, v.left) and check(pr, v.right)
                    assert check(psi, make_split(b, ls, rs, ["a"])) == expected


# --------------------------------------------------------------------------
# arithmetic translation


def test_arith_rules():
    phi = parse_arith("(exists x nat (exists y nat (< x y)))")
    out = str(arith_to_hyperctl(phi).right)
    assert "F (one[p_x] & X F one[p_y])" in out
    assert "X (zero[p_x] U (one[p_x] & X G zero[p_x]))" in out
    phi = parse_arith("(exists3 (X1) (exists y set (in y X1)))")
    assert str(arith_to_hyperctl(phi).right) == "exists p_y. X pset[p_y] & X a1[p_y]"
    phi = parse_arith("(forall x nat (exists y nat (exists z nat (+ x y z))))")
    out = str(arith_to_hyperctl(phi).right)
    assert out.startswith("forall p_x. X pset[p_x] & X (zero[p_x] U (one[p_x] & X G zero[p_x])) ->")
    assert "exists w1. X add[w1] & F (argl[w1] & one[p_x])" in out


def test_arith_typing():
    with pytest.raises(ValueError):
        ArithFormula((), ArithQuant("exists", "x", "nat", ArithAtom("in", ("x", "x"))))
    with pytest.raises(ValueError):
        ArithFormula(("X1",), ArithQuant("exists", "x", "nat", ArithAtom("in", ("x", "X1"))))
    with pytest.raises(ValueError):
        ArithFormula((), ArithAtom("<", ("x", "y")))


def test_same_labelling_covers_every_name():
    f = same_labelling(["a1", "a2"])
    assert {"a1", "a2", "pset", "one"} <= propositions(f)
    phi = parse_arith("(exists3 (X1 X2) (exists y set (and (in y X1) (in y X2))))")
    assert {"a1", "a2"} <= propositions(arith_to_hyperctl(phi))
