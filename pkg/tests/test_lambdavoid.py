from hypothesis import given, settings

from artifact.lambdavoid import (
    hydra_candidates,
    step_lemma_violations,
    strict_subterms,
    surface_measure,
    surface_sn,
    trunk,
    void_eta,
    void_sn,
    void_system,
)
from artifact.measures import NatMultiset
from artifact.rewrite import one_step_reducts
from artifact.syntax import parse, show
from artifact.term import alpha_canonical, free_vars

from strategies import terms

VS = void_system()


def V(s):
    return alpha_canonical(parse(s, void=True))


def reducts(t, rule=None):
    return {show(s.target) for s in one_step_reducts(VS, V(t)) if rule in (None, s.name)}


def test_h_with_no_pieces_erases():
    assert reducts("x[_/u]") == {"x"}


def test_h_splits_a_content():
    assert "f[_/u][_/v]" in reducts("f[_/u v]", "h")
    assert "f" in reducts("f[_/u v]", "h")


def test_unboxing_is_erasing():
    assert reducts("z z[_/v]", "void:u") == {"(z z)[_/v]"}


def test_strict_subterms_and_candidates():
    assert {show(s) for s in strict_subterms(V("u v"))} == {"u", "v"}
    assert {show(s) for s in hydra_candidates(V("\\a.a u"))} == {"u"}


def test_trunk():
    assert show(trunk(frozenset(), V("x[_/y]"))) == "x"
    assert show(trunk(frozenset({"y"}), V("x[_/y]"))) == "x[_/y]"
    assert trunk(frozenset(), V("\\y.x[_/y]")) == V("\\y.x[_/y]")


def test_surface_predicate():
    assert surface_sn(frozenset(), V("x y"))
    assert not surface_sn(frozenset(), V("x[_/(\\z.z z) (\\z.z z)]"))
    assert surface_sn(frozenset({"y"}), V("x[_/y]"))


def test_surface_measure():
    assert surface_measure(frozenset(), V("x")) == NatMultiset()
    assert surface_measure(frozenset(), V("x[_/y]")) == NatMultiset.of((0, 1))
    assert surface_measure(frozenset({"y"}), V("x[_/y]")) == NatMultiset()


def test_void_eta():
    assert void_eta(V("x")) == 0
    assert void_eta(V("x[_/y]")) == 1
    assert void_sn(V("(\\x.x) y"))
    assert not void_sn(V("(\\x.x x) (\\x.x x)"))


@settings(max_examples=80, deadline=None)
@given(terms("void", max_leaves=5))
def test_steps_keep_free_variables(t):
    t = alpha_canonical(t)
    for s in one_step_reducts(VS, t):
        assert free_vars(s.target) <= free_vars(t)


@settings(max_examples=40, deadline=None)
@given(terms("void", max_leaves=4))
def test_step_lemma_on_small_terms(t):
    t = alpha_canonical(t)
    if void_sn(t) and surface_sn(frozenset(), t, void_sn):
        assert step_lemma_violations(t) == []
