import pytest
from hypothesis import given, settings

from artifact.lambdaj import (
    beta_reduct,
    deterministic_step,
    full_composition_witness,
    j_normal_form,
    j_system,
    lambdaj_system,
    normalize,
    notgc_count,
    parallel_reducts,
    postpone_w,
    postponed_trace,
    simulate_beta,
    unboxing_reducts,
)
from artifact.measures import j_measure, multiset_greater_bruteforce
from artifact.rewrite import Trace, one_step_reducts, validate_trace
from artifact.syntax import parse, show
from artifact.term import alpha_canonical, is_lambda_term, multiplicity, subst

from strategies import terms


def P(s):
    return alpha_canonical(parse(s))


LJ = lambdaj_system()
J = j_system()


def test_side_conditions():
    assert {s.name for s in one_step_reducts(LJ, P("(\\x.x)[z/w] u"))} == {"dB", "w"}
    assert [s.name for s in one_step_reducts(LJ, P("(\\x.x) u"))] == ["dB"]
    assert [s.name for s in one_step_reducts(LJ, P("y[x/u]"))] == ["w"]
    assert [s.name for s in one_step_reducts(LJ, P("x[x/u]"))] == ["d"]
    assert {s.name for s in one_step_reducts(LJ, P("(x x)[x/u]"))} == {"c"}


@pytest.mark.parametrize(
    "src, nf",
    [("x[x/y]", "y"), ("(\\x.x) y", "(\\a.a) y"), ("x[y/z][x/w]", "w")],
)
def test_j_normal_form(src, nf):
    assert j_normal_form(P(src)) == P(nf)


@pytest.mark.parametrize(
    "t, u, names",
    [("z", "u", ["w"]), ("x", "u", ["d"]), ("x x", "u", ["c", "d", "d"])],
)
def test_full_composition(t, u, names):
    tr = full_composition_witness(P(t), "x", P(u))
    assert tr.rule_names() == names
    assert validate_trace(tr, LJ)
    assert tr.final == alpha_canonical(subst(P(t), "x", P(u)))


@pytest.mark.parametrize(
    "src, names, out",
    [
        ("(\\x.x) y", ["dB", "d"], "y"),
        ("(\\x.z) y", ["dB", "w"], "z"),
        ("(\\x.x x) y", ["dB", "c", "d", "d"], "y y"),
    ],
)
def test_beta_simulation(src, names, out):
    tr = simulate_beta(P(src), ())
    assert tr.rule_names() == names
    assert tr.final == P(out)
    assert beta_reduct(P(src), ()) == P(out)


def test_deterministic_normalisation():
    tr = normalize(LJ, P("(\\x.x x) y"))
    assert show(tr.final) == "y y" and len(tr.rule_steps()) == 4
    assert deterministic_step(LJ, P("y y")) is None


def test_parallel_reducts():
    assert parallel_reducts(P("x")) == {P("x")}
    out = parallel_reducts(P("(\\x.(\\a.a) (\\a.a)) ((\\a.a) (\\a.a))"))
    assert P("(\\x.\\a.a) (\\a.a)") in out
    assert P("\\a.a") in out
    with pytest.raises(ValueError):
        parallel_reducts(P("x[x/y]"))


def test_postpone_w_swaps_a_pair():
    t = P("((\\x.x) y)[z/w]")
    w = next(s for s in one_step_reducts(LJ, t) if s.name == "w")
    db = one_step_reducts(LJ, w.target)[0]
    out = postpone_w(Trace(t, [w, db]))
    assert out.rule_names() == ["dB", "w"]
    assert out.final == db.target
    assert validate_trace(out, LJ)


def test_postpone_w_keeps_sorted_traces():
    t = P("z[x/y][w/u]")
    steps = []
    cur = t
    while (succ := one_step_reducts(LJ, cur)):
        steps.append(succ[0])
        cur = succ[0].target
    tr = Trace(t, steps)
    assert set(tr.rule_names()) == {"w"}
    assert postpone_w(tr).steps == tr.steps
    db = one_step_reducts(LJ, P("(\\x.x) y"))
    assert postpone_w(Trace(P("(\\x.x) y"), db)).steps == db


def test_w_can_enable_a_d_step():
    # erasing [b/a] drops the multiplicity of a to one, so no equal-count reordering exists
    t = P("(a z)[b/a][a/x]")
    w = next(s for s in one_step_reducts(LJ, t) if s.name == "w")
    d = next(s for s in one_step_reducts(LJ, w.target) if s.name == "d")
    tr = Trace(t, [w, d])
    out = postpone_w(tr)
    assert validate_trace(out, LJ) and out.final == d.target
    assert out.rule_names() == ["c", "d", "w", "w"]
    assert postponed_trace(t, d.target, 1) is None
    assert postponed_trace(t, d.target, 2) is not None


def test_unboxing():
    assert unboxing_reducts(P("z (v[x/y])")) == {P("(z v)[x/y]")}
    assert unboxing_reducts(P("\\x.x[y/z]")) == set()
    assert unboxing_reducts(P("v[w/z[x/y]]")) == {P("v[w/z][x/y]")}


@settings(max_examples=150, deadline=None)
@given(terms("j", max_leaves=7))
def test_j_steps_decrease_the_measure(t):
    t = alpha_canonical(t)
    for s in one_step_reducts(J, t):
        assert multiset_greater_bruteforce(j_measure(t), j_measure(s.target))


@settings(max_examples=150, deadline=None)
@given(terms("j", max_leaves=7))
def test_j_normal_forms_are_pure_and_unique(t):
    t = alpha_canonical(t)
    nf = j_normal_form(t)
    assert is_lambda_term(nf)
    for s in one_step_reducts(J, t):
        assert j_normal_form(s.target) == nf


@settings(max_examples=150, deadline=None)
@given(terms("j", max_leaves=6), terms("j", max_leaves=4))
def test_full_composition_property(t, u):
    t, u = alpha_canonical(t), alpha_canonical(u)
    tr = full_composition_witness(t, "x", u)
    assert validate_trace(tr, LJ)
    assert tr.final == alpha_canonical(subst(t, "x", u))
    if multiplicity(t, "x"):
        assert set(tr.rule_names()) <= {"d", "c"}


@settings(max_examples=100, deadline=None)
@given(terms("j", max_leaves=6))
def test_postponement_keeps_endpoints(t):
    t = alpha_canonical(t)
    steps = []
    cur = t
    for _ in range(4):
        succ = one_step_reducts(LJ, cur)
        if not succ:
            break
        steps.append(succ[-1])
        cur = succ[-1].target
    tr = Trace(t, steps)
    out = postpone_w(tr)
    assert validate_trace(out, LJ)
    assert out.final == tr.final
    assert notgc_count(out) >= notgc_count(tr)
    names = out.rule_names()
    assert names == sorted(names, key=lambda n: n == "w")
