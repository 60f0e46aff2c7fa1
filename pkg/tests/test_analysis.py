import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artifact.analysis import (
    FAIL,
    INCONCLUSIVE,
    PASS,
    bisim_failures,
    certify_sn,
    count_terms,
    detect_divergence,
    enumerate_terms,
    explore,
    is_sn,
    local_confluence,
    psn_suite,
    psn_verdict,
    replay_bisim_failure,
    sample_terms,
    strong_bisim_check,
)
from artifact.equivalences import CS, O, OBOX, SIGMA_HAT
from artifact.rewrite import validate_trace
from artifact.syntax import parse, show
from artifact.term import App, Jump, Lam, Var, alpha_canonical, is_lambda_term

GUERRINI = "(z z)[z/y][x/(z z)[z/y]]"
OMEGA = "(\\x.x x) (\\x.x x)"


def P(s, void=False):
    return alpha_canonical(parse(s, void=void))


def test_explore_small_graphs():
    g = explore("lambdaj", P("\\x.x"))
    assert g.complete and len(g.states) == 1
    g = explore("lambdaj", P(OMEGA), max_states=200)
    cyc = g.find_cycle()
    assert cyc is not None
    assert P("(x x)[x/\\x.x x]") in cyc
    assert "digraph" in g.to_dot()


def test_certify_sn():
    assert certify_sn(explore("beta", P("\\x.x"))).status == PASS
    v = certify_sn(explore("beta", P(OMEGA)))
    assert v.status == FAIL
    assert validate_trace(v.counterexample)
    capped = explore("beta", P("(\\x.x x x) (\\x.x x x)"), max_states=5)
    assert not capped.complete
    assert certify_sn(capped).status in (FAIL, INCONCLUSIVE)
    assert is_sn("beta", P("(\\x.x x x) (\\x.x x x)"), max_states=5) != PASS


def test_guerrini_term():
    t = P(GUERRINI)
    v = detect_divergence("lambdaj_n", t, depth=12)
    assert v.status == FAIL
    assert validate_trace(v.counterexample)
    ok = detect_divergence("lambdaj_obox", t)
    assert ok.status == PASS
    g = explore("lambdaj_obox", t)
    assert g.complete and g.find_cycle() is None
    assert detect_divergence("lambdaj", P("x")).status == PASS


def test_local_confluence():
    assert local_confluence("lambdaj", P("(\\x.x) y")).status == PASS
    assert local_confluence("lambdaj", P("(\\x.(\\a.a) (\\a.a)) ((\\a.a) (\\a.a))")).status == PASS


def test_bisimulation_results():
    assert strong_bisim_check(O, "lambdaj", [P("(\\x.x x) y"), P("(x y)[x/u][y/v]")]).passed
    fs = bisim_failures(O, "void", P("x[_/t[_/x] v]", void=True))
    assert fs and replay_bisim_failure(fs[0], O, "void")
    left = P("(\\y.(\\x.y) z1) z2")
    fs = bisim_failures(SIGMA_HAT, "beta", left)
    assert fs and replay_bisim_failure(fs[0], SIGMA_HAT, "beta")
    fs = bisim_failures(OBOX, "lambdaj", P("z[x/y][y/u]"), first_only=False)
    assert fs and all(replay_bisim_failure(f, OBOX, "lambdaj") for f in fs)


def test_cs_is_a_bisimulation_on_void_terms():
    assert strong_bisim_check(CS, "void", [P("x[_/y][_/z]", void=True), P("(x x)[_/y][_/(\\a.a) z]", void=True)]).passed


# ---------------------------------------------------------------- enumeration

def _naive(universe, size, pool, binders):
    """Every named term of exactly ``size``; an independent oracle."""
    if size == 1:
        return [Var(n) for n in pool + binders]
    out = [Lam(b, s) for b in binders for s in _naive(universe, size - 1, pool, binders)]
    for k in range(1, size - 1):
        for a, b in itertools.product(_naive(universe, k, pool, binders), _naive(universe, size - 1 - k, pool, binders)):
            out.append(App(a, b))
            if universe == "j":
                out.extend(Jump(a, x, b) for x in binders)
    return out


def _oracle(universe, size, pool):
    binders = ("p", "q", "r", "s")[: size - 1]
    return {
        alpha_canonical(t)
        for t in _naive(universe, size, pool, binders)
        if t.free_vars() <= set(pool)
    }


@pytest.mark.parametrize("universe, size", [("lambda", n) for n in range(1, 6)] + [("j", n) for n in range(1, 5)])
def test_enumeration_matches_brute_force(universe, size):
    pool = ("x", "y")
    got = [t for t in enumerate_terms(universe, size, pool) if t.size == size]
    assert len(got) == len(set(got))
    assert set(got) == _oracle(universe, size, pool)
    assert count_terms(universe, size, len(pool)) == len(got)


def test_enumeration_small_cases():
    assert [show(t) for t in enumerate_terms("lambda", 2, ("x",))] == ["x", "\\a.x", "\\a.a"]
    assert list(enumerate_terms("lambda", 1, ())) == []
    assert all(t.size == 1 for t in enumerate_terms("lambda", 1))
    assert [count_terms("j", n, 3) for n in range(1, 6)] == [3, 4, 26, 97, 573]
    assert sum(1 for _ in enumerate_terms("lambda", 9, ())) == 2622


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["lambda", "j", "void"]), st.integers(1, 9), st.integers(0, 1000))
def test_sampling_is_seeded_and_sized(universe, size, seed):
    a = sample_terms(universe, size, 5, seed=seed)
    assert a == sample_terms(universe, size, 5, seed=seed)
    assert all(t.size == size and t == alpha_canonical(t) for t in a)


def test_psn_small():
    report = psn_suite(5)
    assert psn_verdict(report).status == PASS
    assert report.candidates == report.beta_sn
    assert all(is_lambda_term(t) for t in enumerate_terms("lambda", 3, ()))


def test_closed_counts_match_published_sequence():
    # OEIS A135501: closed lambda-terms by size (variables count 1)
    assert [count_terms("lambda", n, 0) for n in range(1, 11)] == [0, 1, 2, 4, 13, 42, 139, 506, 1915, 7558]
