import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artifact.equivalences import CS
from artifact.lambdaj import j_system, lambdaj_system
from artifact.measures import (
    DivergenceError,
    NatMultiset,
    eta,
    inner_measure,
    j_measure,
    jump_body_size_sum,
    multiset_greater_bruteforce,
    outer_measure,
    potential_multiplicity,
)
from artifact.rewrite import equiv_class, one_step_reducts
from artifact.syntax import parse
from artifact.term import alpha_canonical
from artifact.zoo import build

from strategies import terms


def P(s):
    return alpha_canonical(parse(s))


def test_worked_multiplicities():
    assert potential_multiplicity(P("(\\x.x x) y"), "y") == 1
    assert potential_multiplicity(P("(x x)[x/y]"), "y") == 2
    assert potential_multiplicity(P("x"), "x") == 1
    assert potential_multiplicity(P("z w"), "x") == 0


def test_worked_j_measures():
    assert j_measure(P("(x x)[x/y]")) == NatMultiset.of(2)
    assert j_measure(P("(\\x.x x) y")) == NatMultiset()
    assert j_measure(P("z[x/y][y/w]")) == NatMultiset.of(0, 1)


def test_propagation_measures():
    assert inner_measure(P("x y")) == 0
    before, after = P("(x y)[x/u]"), P("x[x/u] y")
    assert jump_body_size_sum(before) == 3 and jump_body_size_sum(after) == 1
    assert inner_measure(before) > inner_measure(after)
    assert outer_measure(P("x y")) == 0
    assert outer_measure(P("\\y.t[x/u]")) > outer_measure(P("(\\y.t)[x/u]"))


def test_eta():
    beta = build("beta")
    assert eta(beta, P("\\x.x")) == 0
    assert eta(beta, P("(\\x.x) ((\\y.y) z)")) == 2
    assert eta(lambdaj_system(), P("x[x/y]")) == 1
    assert eta(beta, P("(\\y.(\\x.y) z1) z2")) == 2
    assert eta(beta, P("(\\x.\\y.y) z1 z2")) == 2
    with pytest.raises(DivergenceError):
        eta(beta, P("(\\x.x x) (\\x.x x)"))


nat_lists = st.lists(st.integers(0, 5), max_size=6)


@given(nat_lists, nat_lists)
def test_multiset_order_is_a_strict_order(a, b):
    m, n = NatMultiset(a), NatMultiset(b)
    assert not (multiset_greater_bruteforce(m, n) and multiset_greater_bruteforce(n, m))
    assert not multiset_greater_bruteforce(m, m)
    assert multiset_greater_bruteforce(m | NatMultiset.of(3), m)


@given(nat_lists, nat_lists, nat_lists)
def test_multiset_order_is_transitive(a, b, c):
    m, n, k = NatMultiset(a), NatMultiset(b), NatMultiset(c)
    if multiset_greater_bruteforce(m, n) and multiset_greater_bruteforce(n, k):
        assert multiset_greater_bruteforce(m, k)


@settings(max_examples=100, deadline=None)
@given(terms("j", max_leaves=6))
def test_propagation_measures_are_cs_invariant(t):
    t = alpha_canonical(t)
    for u in equiv_class(CS, t, cap=5000):
        assert inner_measure(u) == inner_measure(t)
        assert outer_measure(u) == outer_measure(t)


@settings(max_examples=100, deadline=None)
@given(terms("j", max_leaves=6))
def test_propagation_steps_decrease(t):
    t = alpha_canonical(t)
    for s in one_step_reducts(build("in"), t):
        assert inner_measure(s.target) < inner_measure(t)
    for s in one_step_reducts(build("out"), t):
        assert outer_measure(s.target) < outer_measure(t)


@settings(max_examples=100, deadline=None)
@given(terms("lambda", max_leaves=6))
def test_pure_terms_have_empty_j_measure(t):
    assert j_measure(t) == NatMultiset()
    for s in one_step_reducts(j_system(), t):
        raise AssertionError(s)
