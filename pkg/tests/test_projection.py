import pytest
from hypothesis import given, settings

from artifact.equivalences import OBOX
from artifact.lambdaj import lambdaj_system
from artifact.projection import check_projection_step, clause_of, gc_project, projection_table
from artifact.rewrite import axiom_moves, one_step_reducts
from artifact.syntax import parse, show
from artifact.term import alpha_canonical, is_void_term
from artifact.zoo import build

from strategies import terms


def P(s):
    return alpha_canonical(parse(s))


TABLE = [
    ("f[y/x][x/u]", "f[x/u]", "f[_/u]", "f[_/u]"),
    ("f[y/x z][x/u][z/v]", "f[x/u][z/v]", "f[_/u v]", "f[_/u][_/v]"),
    ("f[y/x x][x/u]", "f[x/u]", "f[_/u u]", "f[_/u]"),
    ("(f[w/f[y/x z]] g)[x/u][z/v]", "(f[w/f] g)[x/u][z/v]", "f[_/f[_/u v]] g", "(f[_/f] g)[_/u][_/v]"),
]


def test_projection_table_is_bit_exact():
    assert [tuple(show(t) for t in row) for row in projection_table()] == TABLE


@pytest.mark.parametrize(
    "src, out",
    [("f[y/x][x/u]", "f[_/u]"), ("f[y/x x][x/u]", "f[_/u u]"), ("(\\x.x) y", "(\\a.a) y")],
)
def test_gc_project(src, out):
    assert show(gc_project(P(src))) == out


def test_erasing_step_with_equal_images():
    t = P("f[y/x][x/u]")
    w = next(s for s in one_step_reducts(lambdaj_system(), t) if s.name == "w")
    v = check_projection_step(t, w)
    assert v.ok and v.clause == "erase" and v.equal


def test_erasing_step_needs_h():
    t = P("f[y/x z][x/u][z/v]")
    w = next(s for s in one_step_reducts(lambdaj_system(), t) if s.name == "w" and s.position == (1, 1))
    v = check_projection_step(t, w)
    assert v.ok and not v.equal
    assert v.witness.rule_names() == ["h"]


def test_clause_lookup():
    t = P("(\\x.x) y")
    assert clause_of(one_step_reducts(lambdaj_system(), t)[0]) == "dB"


@settings(max_examples=60, deadline=None)
@given(terms("j", max_leaves=5))
def test_every_move_projects(t):
    t = alpha_canonical(t)
    assert is_void_term(gc_project(t)) or gc_project(t) == t
    sys = build("lambdaj_obox_u")
    for s in one_step_reducts(sys, t) + axiom_moves(OBOX, t):
        v = check_projection_step(t, s)
        assert v.ok, v.message
