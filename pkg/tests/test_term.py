import pytest
from hypothesis import given, settings

from artifact.syntax import parse, show
from artifact.term import (
    alpha_canonical,
    alpha_eq,
    context_at,
    enumerate_splits,
    free_vars,
    multiplicity,
    positions,
    positions_of,
    rename_at,
    replace_at,
    subst,
    subterm_at,
)

from strategies import terms


def P(s):
    return parse(s)


@pytest.mark.parametrize(
    "src, fv",
    [("x[x/y]", {"y"}), ("(\\y.x)[x/y]", {"y"}), ("\\x.x y", {"y"})],
)
def test_free_vars(src, fv):
    assert free_vars(P(src)) == fv


@pytest.mark.parametrize("src, n", [("x x", 2), ("(\\x.x) x", 1), ("x (x x)", 3), ("y", 0)])
def test_multiplicity(src, n):
    assert multiplicity(P(src), "x") == n


def test_substitution_avoids_capture():
    out = subst(P("\\y.x"), "x", P("y z"))
    assert alpha_eq(out, P("\\w.y z"))
    assert subst(P("x"), "x", P("u")) == P("u")
    assert subst(P("y"), "x", P("u")) == P("y")


def test_alpha_canonical_identifies_renamings():
    assert alpha_canonical(P("(\\y.x)[x/y]")) == alpha_canonical(P("(\\w.v)[v/y]"))
    assert alpha_canonical(P("\\a.\\b.a")) == alpha_canonical(P("\\c.\\d.c"))
    assert alpha_canonical(P("x")) == P("x")
    assert not alpha_eq(P("\\a.\\b.a"), P("\\a.\\b.b"))


def test_rename_at_example():
    t = P("x z x x")
    out = rename_at(t, [(1, 1, 1), (2,)], "x", "y")
    assert show(out) == "y z x y"
    assert rename_at(t, [], "x", "y") == t
    assert rename_at(t, positions_of(t, "x"), "x", "y") == P("y z y y")


def test_splits():
    outs = {show(s) for s in enumerate_splits(P("x x x x"), "x", "y")}
    assert {"y x y x", "x y y y"} <= outs
    assert "y y y y" not in outs and "x x x x" not in outs
    assert len(outs) == 2**4 - 2
    assert len(enumerate_splits(P("x x"), "x", "y")) == 2
    with pytest.raises(ValueError):
        enumerate_splits(P("x y"), "x", "y2")


def test_context_at():
    t = P("\\x.z[y/w x]")
    sub, ctx = context_at(t, (1, 2, 2))
    assert sub == P("x")
    assert ctx.binders == {"x"}
    assert ctx.shape == "boxed"
    assert ctx.plug(sub) == t
    sub, ctx = context_at(t, ())
    assert sub == t and ctx.binders == frozenset() and ctx.shape == "spine"
    assert context_at(P("u v"), (1,))[1].shape == "spine"


@settings(max_examples=200, deadline=None)
@given(terms("void"))
def test_canonical_is_idempotent_and_alpha_invariant(t):
    c = alpha_canonical(t)
    assert alpha_canonical(c) == c
    assert free_vars(c) == free_vars(t)
    assert c.size == t.size


@settings(max_examples=200, deadline=None)
@given(terms("j"))
def test_every_position_plugs_back(t):
    for p in positions(t):
        assert replace_at(t, p, subterm_at(t, p)) == t


@settings(max_examples=200, deadline=None)
@given(terms("j"), terms("lambda", max_leaves=3))
def test_substitution_counts_occurrences(t, u):
    out = subst(t, "x", u)
    if "x" not in free_vars(u):
        assert multiplicity(out, "x") == 0
    assert out.size == t.size + multiplicity(t, "x") * (u.size - 1)
