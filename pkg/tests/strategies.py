"""Hypothesis strategies and seeded random generators for formulas and models."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from hyperlogic.models import KripkeStructure, LassoTrace
from hyperlogic.syntax import (
    FALSE,
    TRUE,
    And,
    Atom,
    Eventually,
    Exists,
    Forall,
    Globally,
    Iff,
    Implies,
    Next,
    Not,
    Or,
    Until,
)


def letters(props):
    return st.frozensets(st.sampled_from(list(props))) if props else st.just(frozenset())


def traces(props=("a", "b"), max_stem=3, max_loop=2):
    return st.builds(
        LassoTrace,
        st.lists(letters(props), max_size=max_stem).map(tuple),
        st.lists(letters(props), min_size=1, max_size=max_loop).map(tuple),
    )


def qf_formulas(variables=("p", "q"), props=("a", "b"), depth=3):
    """Quantifier-free formulas of temporal depth at most ``depth``."""
    atoms = st.builds(Atom, st.sampled_from(list(props)), st.sampled_from(list(variables)))
    base = st.one_of(atoms, st.sampled_from([TRUE, FALSE]))

    def boolean(leaves):
        return st.recursive(leaves, lambda s: st.one_of(
            st.builds(Not, s), st.builds(And, s, s), st.builds(Or, s, s),
            st.builds(Implies, s, s), st.builds(Iff, s, s)), max_leaves=4)

    def build(d):
        if d == 0:
            return boolean(base)
        sub = build(d - 1)
        temporal = st.one_of(st.builds(Next, sub), st.builds(Eventually, sub),
                             st.builds(Globally, sub), st.builds(Until, sub, sub))
        return boolean(st.one_of(sub, temporal))

    return build(depth)


def prefixes(variables=("p", "q")):
    return st.lists(st.sampled_from(["exists", "forall"]), min_size=len(variables),
                    max_size=len(variables)).map(lambda qs: tuple(zip(qs, variables)))


# --------------------------------------------------------------------------
# seeded generators for the acceptance battery


def random_letter(rng: random.Random, props):
    return frozenset(p for p in props if rng.random() < 0.5)


def random_trace(rng: random.Random, props, max_stem, max_loop):
    s = rng.randint(0, max_stem)
    l = rng.randint(1, max_loop)
    return LassoTrace(tuple(random_letter(rng, props) for _ in range(s)),
                      tuple(random_letter(rng, props) for _ in range(l)))


def random_qf(rng: random.Random, variables, props, depth, size=3):
    """Random formula with temporal depth ≤ ``depth``; ``size`` bounds Boolean nesting."""
    r = rng.random()
    if size <= 0 or r < 0.2:
        if rng.random() < 0.1:
            return rng.choice([TRUE, FALSE])
        return Atom(rng.choice(props), rng.choice(variables))
    if depth > 0 and r < 0.6:
        op = rng.choice([Next, Eventually, Globally, Until, Until])
        if op is Until:
            return Until(random_qf(rng, variables, props, depth - 1, size - 1),
                         random_qf(rng, variables, props, depth - 1, size - 1))
        return op(random_qf(rng, variables, props, depth - 1, size - 1))
    op = rng.choice([Not, And, Or, Implies, Iff])
    if op is Not:
        return Not(random_qf(rng, variables, props, depth, size - 1))
    return op(random_qf(rng, variables, props, depth, size - 1),
              random_qf(rng, variables, props, depth, size - 1))


def random_kripke(rng: random.Random, n, props):
    names = [f"v{i}" for i in range(n)]
    labels = {v: random_letter(rng, props) for v in names}
    edges = {v: tuple(sorted(set(rng.sample(names, rng.randint(1, min(2, n)))))) for v in names}
    return KripkeStructure(labels, edges, names[0], tuple(names))


def random_hyperctl(rng: random.Random, props, quantifiers=2, temporal=2):
    """Closed formula with at most ``quantifiers`` nested quantifiers and
    ``temporal`` nested temporal operators along any branch."""

    def body(bound, q_left, t_left, size):
        r = rng.random()
        if q_left and (not bound or r < 0.35):
            v = f"p{len(bound)}"
            inner = body(bound + [v], q_left - 1, t_left, size)
            return (Exists if rng.random() < 0.5 else Forall)(v, inner)
        if size <= 0 or r < 0.5:
            return Atom(rng.choice(props), rng.choice(bound))
        if t_left and r < 0.75:
            op = rng.choice([Next, Eventually, Globally, Until])
            if op is Until:
                return Until(body(bound, q_left, t_left - 1, size - 1),
                             body(bound, q_left, t_left - 1, size - 1))
            return op(body(bound, q_left, t_left - 1, size - 1))
        op = rng.choice([Not, And, Or])
        if op is Not:
            return Not(body(bound, q_left, t_left, size - 1))
        return op(body(bound, q_left, t_left, size - 1), body(bound, q_left, t_left, size - 1))

    return body([], quantifiers, temporal, 3)
