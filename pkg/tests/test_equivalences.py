import pytest
from hypothesis import given, settings

from artifact.equivalences import (
    BOX,
    CS,
    O,
    OBOX,
    axiom_set,
    equivalent,
    global_obox_class,
    sigma_hat_class,
    spine_global_o_class,
    spine_global_o_equal,
)
from artifact.rewrite import ClassCapExceeded, axiom_moves, equiv_class
from artifact.syntax import parse
from artifact.term import alpha_canonical, free_vars

from strategies import terms


def P(s):
    return alpha_canonical(parse(s))


def test_named_sets():
    assert axiom_set("o") == O
    assert axiom_set("CS,sigma1") == ("CS", "sigma1")
    with pytest.raises(ValueError):
        axiom_set("nope")


def test_cs_needs_independent_jumps():
    assert equivalent(CS, P("t[x/s][y/v]"), P("t[y/v][x/s]"))
    assert not equivalent(CS, P("t[x/s][y/x]"), P("t[y/x][x/s]"))


def test_box1_needs_the_variable_in_the_argument():
    assert equivalent(BOX, P("(t v x)[x/u]"), P("t v x[x/u]"))
    assert equivalent(BOX, P("(t x)[x/u]"), P("t x[x/u]"))
    assert not equivalent(BOX, P("(x v)[x/u]"), P("x v[x/u]"))


def test_sigma1_and_distinct_variables():
    assert equivalent(O, P("\\y.t[x/s]"), P("(\\y.t)[x/s]"))
    assert not equivalent(OBOX, P("x"), P("y"))


def test_spine_global_o():
    assert spine_global_o_equal(P("\\y.t[x/s]"), P("(\\y.t)[x/s]"))
    assert spine_global_o_equal(P("t"), P("t"))
    # x occurs outside the moved jump, so the guard fails
    assert not spine_global_o_equal(P("(x x[x/u])"), P("(x x)[x/u]"))


def test_sigma_hat():
    assert P("\\y.(\\x.t) u") in sigma_hat_class(P("(\\x.\\y.t) u"))
    assert sigma_hat_class(P("x")) == {P("x")}
    assert P("(\\x.\\y.y) z1 z2") in sigma_hat_class(P("(\\y.(\\x.y) z1) z2"))
    with pytest.raises(ValueError):
        sigma_hat_class(P("x[x/y]"))


@settings(max_examples=80, deadline=None)
@given(terms("j", max_leaves=6))
def test_axioms_preserve_free_variables_and_size(t):
    t = alpha_canonical(t)
    for m in axiom_moves(OBOX, t):
        assert free_vars(m.target) == free_vars(t)
        assert m.target.size == t.size


@settings(max_examples=60, deadline=None)
@given(terms("j", max_leaves=6))
def test_local_o_is_inside_global_o(t):
    t = alpha_canonical(t)
    try:
        local = equiv_class(O, t, cap=3000)
    except ClassCapExceeded:
        return
    assert local <= spine_global_o_class(t)
    try:
        assert equiv_class(OBOX, t, cap=3000) <= global_obox_class(t)
    except ClassCapExceeded:
        pass
