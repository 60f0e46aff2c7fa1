import pytest
from hypothesis import given, settings

from artifact.analysis import explore
from artifact.equivalences import CS
from artifact.rewrite import RewriteError, equivalent, one_step_reducts, validate_trace
from artifact.syntax import parse, show
from artifact.term import alpha_canonical
from artifact.zoo import (
    CALCULI,
    PRIMARY_CALCULI,
    beta_norm_of_class,
    build,
    propagation_normal_form,
    simulate_les_step,
    simulate_permutative_step,
)

from strategies import terms


def P(s):
    return alpha_canonical(parse(s))


def root_step(calculus, src, name):
    t = P(src)
    return t, next(s for s in one_step_reducts(build(calculus), t) if s.name == name and s.position == ())


def test_every_primary_calculus_builds():
    for c in PRIMARY_CALCULI:
        assert c in CALCULI
        assert build(c).name == c
    with pytest.raises(RewriteError):
        build("nope")


def test_rule_shapes():
    _, s = root_step("in", "(t v)[x/u]", "in2")
    assert show(s.target) == "t[a/u] v"
    _, s = root_step("les", "(x x)[x/u]", "les:@")
    assert show(s.target) == "a[a/u] a[a/u]"
    _, s = root_step("permutative", "z ((\\x.x) u)", "uhat")
    assert show(s.target) == "(\\a.z a) u"


def test_les_application_step_decomposes():
    t, s = root_step("les", "(x x)[x/u]", "les:@")
    tr = simulate_les_step(t, s)
    assert validate_trace(tr, build("inner"))
    assert tr.rule_names()[0] == "c"
    assert set(tr.rule_names()[1:]) <= {"in2", "in3"}
    assert equivalent(CS, tr.final, s.target)


def test_les_erasure_is_a_w_step():
    t, s = root_step("les", "(x v)[y/u]", "les:w")
    assert simulate_les_step(t, s).rule_names() == ["w"]


def test_permutative_step_is_simulated():
    t, s = root_step("permutative", "z ((\\x.x) u)", "uhat")
    tr = simulate_permutative_step(t, s)
    assert validate_trace(tr, build("structural_modulo"))


def test_beta_norm():
    assert beta_norm_of_class(P("\\x.x")) == 0
    assert beta_norm_of_class(P("(\\y.(\\x.y) z1) z2")) == beta_norm_of_class(P("(\\x.\\y.y) z1 z2")) == 2
    with pytest.raises(ValueError):
        beta_norm_of_class(P("x[x/y]"))


def test_propagation_normal_forms():
    assert propagation_normal_form("in", P("(x y)[x/u]")) == P("x[x/u] y")
    assert propagation_normal_form("out", P("\\y.y[x/u]")) == P("(\\y.y)[x/u]")


@settings(max_examples=60, deadline=None)
@given(terms("j", max_leaves=5))
def test_les_steps_are_simulated(t):
    t = alpha_canonical(t)
    for s in one_step_reducts(build("les"), t):
        if s.position == ():
            tr = simulate_les_step(t, s)
            assert equivalent(CS, tr.final, s.target)


def test_uhat_reading_and_its_self_loop():
    # the default reading mirrors boxhat, so uhat stays inside its class
    t = P("(\\a.x a) y")
    perm = build("permutative")
    assert explore(perm, t).find_cycle() is not None
    fig = perm.with_params(uhat_figure=True)
    assert explore(fig, P("z ((\\x.y) u)")).find_cycle() is None
    assert [s.name for s in one_step_reducts(perm, P("z ((\\x.y) u)"))] == ["beta"]
