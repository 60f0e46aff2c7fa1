import pytest
from hypothesis import given, settings

from artifact.equivalences import CS, N, O
from artifact.lambdaj import lambdaj_system
from artifact.rewrite import (
    ClassCapExceeded,
    Quotient,
    RewriteError,
    RewriteSystem,
    Trace,
    apply_rule_at,
    axiom_moves,
    equiv_class,
    equivalent,
    is_normal,
    modulo_steps,
    modulo_trace,
    one_step_modulo,
    one_step_reducts,
    sort_void_stacks,
    validate_trace,
)
from artifact.syntax import parse, show
from artifact.term import alpha_canonical
from artifact.zoo import build

from strategies import terms


def P(s, void=False):
    return alpha_canonical(parse(s, void=void))


LJ = lambdaj_system()


def shows(ts):
    return sorted(show(t) for t in ts)


def test_rules_at_the_root():
    assert shows(apply_rule_at(LJ, P("(\\x.x)[z/w] y"), (), "dB")) == ["b[b/y][a/w]"]
    assert shows(apply_rule_at(LJ, P("z[x/y]"), (), "w")) == ["z"]
    assert shows(apply_rule_at(LJ, P("(x x)[x/u]"), (), "c")) == [
        "(a b)[b/u][a/u]",
        "(b a)[b/u][a/u]",
    ]


def test_one_step_reducts():
    assert one_step_reducts(LJ, P("x")) == []
    assert shows(s.target for s in one_step_reducts(LJ, P("x[x/y]"))) == ["y"]
    steps = one_step_reducts(LJ, P("(\\x.x x) y"))
    assert [s.describe() for s in steps] == ["dB@ε"]
    assert show(steps[0].target) == "(a a)[a/y]"
    assert is_normal(LJ, P("x y"))


def test_wrong_universe_is_rejected():
    with pytest.raises(RewriteError):
        one_step_reducts(LJ, P("x[_/y]", void=True))
    with pytest.raises(RewriteError):
        RewriteSystem("bad", ("no-such-rule",))


def test_classes():
    assert equiv_class(O, P("x")) == {P("x")}
    assert shows(equiv_class(CS, P("z[x/a][y/b]"))) == ["z[d/a][c/b]", "z[d/b][c/a]"]
    assert P("\\y.t[x/s]") in equiv_class(O, P("(\\y.t)[x/s]"))
    assert equivalent(O, P("(\\y.t)[x/s]"), P("\\y.t[x/s]"))
    assert not equivalent(O, P("x"), P("y"))
    with pytest.raises(ClassCapExceeded):
        equiv_class(CS, P("z[a/x1][b/x2][c/x3][d/x4][e/x5]"), cap=10)


def test_modulo_steps_need_box_shift():
    t = P("(z z)[z/y][x/(z z)[z/y]]")
    n = build("lambdaj_n")
    plain = {s.target for s in one_step_reducts(n, t)}
    modulo = one_step_modulo(n, t)
    assert any(u not in plain for u in modulo)
    assert one_step_modulo(build("lambdaj_o"), P("x y")) == set()


def test_modulo_trace_replays():
    t = P("(\\x.x x) y")
    sys = build("lambdaj_o")
    q = Quotient(sys.axioms)
    steps = []
    cur = t
    for _ in range(4):
        succ = modulo_steps(sys, cur, q)
        if not succ:
            break
        steps.append(succ[0][0])
        cur = succ[0][0].target
    tr = modulo_trace(q, t, steps)
    assert validate_trace(tr, sys)
    assert show(tr.final) == "y y"


def test_validate_rejects_forged_steps():
    good = one_step_reducts(LJ, P("x[x/y]"))[0]
    assert validate_trace(Trace(good.source, [good]), LJ)
    forged = type(good)(good.source, P("z"), "rule", "d", ())
    with pytest.raises(RewriteError):
        validate_trace(Trace(good.source, [forged]), LJ)


@settings(max_examples=100, deadline=None)
@given(terms("j", max_leaves=6))
def test_axiom_moves_are_symmetric(t):
    t = alpha_canonical(t)
    for m in axiom_moves(O, t):
        assert t in {b.target for b in axiom_moves(O, m.target)}


@settings(max_examples=100, deadline=None)
@given(terms("void", max_leaves=7))
def test_sorted_void_stacks_stay_in_class(t):
    t = alpha_canonical(t)
    s, steps = sort_void_stacks(t)
    assert validate_trace(Trace(t, steps))
    assert s == sort_void_stacks(s)[0]
    try:
        assert s in equiv_class(CS, t, cap=2000)
    except ClassCapExceeded:
        pass


@settings(max_examples=60, deadline=None)
@given(terms("void", max_leaves=6))
def test_sorted_quotient_agrees_with_full_classes(t):
    t = alpha_canonical(t)
    full = equiv_class(CS, t, cap=5000)
    q = Quotient(CS)
    sorted_members = {sort_void_stacks(u)[0] for u in full}
    assert q.members(t) == sorted_members
    for u in full:
        assert q.rep(u) == q.rep(t)


def test_n_contains_o():
    t = P("(z z)[z/y][x/(z z)[z/y]]")
    assert equiv_class(O, t) <= equiv_class(N, t)
