"""Satellite calculi as rewrite systems.

* ``beta``: plain β on λ-terms
* ``inner``: λj plus the propagation rules in1..in4, modulo CS
* ``outer``: λj plus out1..out4 (which also move void jumps), modulo CS
* ``les``: an explicit substitution calculus with propagations, modulo CS
* ``permutative``: β and û on λ-terms, modulo σ̂1, σ̂2, box̂
* ``structural_modulo``: λj with u and û, modulo obox and the σ̂ axioms

``build`` maps calculus ids to systems.  The ids double as the values of
the CLI's ``--calculus`` option.
"""

from __future__ import annotations

from .equivalences import CS, N, O, OBOX, PI, freshen, occurs
from .lambdaj import j_system, lambdaj_system, notgc_system
from .lambdavoid import void_system
from .measures import eta
from .rewrite import (
    RewriteError,
    RewriteParams,
    RewriteSystem,
    Step,
    Trace,
    modulo_steps,
    quotient_for,
    register_rule,
    search_modulo,
)
from .term import (
    App,
    Jump,
    Lam,
    Term,
    Var,
    all_names,
    alpha_canonical,
    is_lambda_term,
    replace_at,
    subst,
    subterm_at,
)


# ---------------------------------------------------------------- β and û

def _beta(t, params):
    if t.__class__ is App and t.fun.__class__ is Lam:
        return [(subst(t.fun.body, t.fun.binder, t.arg), None)]
    return []


def _uhat(t, params):
    # t ((λx.v) u) -> (λx.t v) u
    if not (t.__class__ is App and t.arg.__class__ is App and t.arg.fun.__class__ is Lam):
        return []
    t0 = t.fun
    lam, u = t.arg.fun, t.arg.arg
    x, v = freshen(lam.binder, lam.body, t0.free_vars())
    if occurs(x, t0):
        return []
    if params.uhat_figure:
        if occurs(x, v):
            return []
    elif not occurs(x, v):
        return []
    return [(App(Lam(x, App(t0, v)), u), None)]


register_rule("beta", ("lambda", "j"), _beta, doc="(λx.t) u -> t{x/u}")
register_rule("uhat", ("lambda", "j"), _uhat, doc="t((λx.v)u) -> (λx.t v)u if x∉fv(t), x∈fv(v)")


# ---------------------------------------------------------------- inner propagations

def _in1(t, params):
    if t.__class__ is Jump and t.body.__class__ is Lam:
        x, u = t.binder, t.content
        y, body = freshen(t.body.binder, t.body.body, u.free_vars() | {x})
        return [(Lam(y, Jump(body, x, u)), None)]
    return []


def _in2(t, params):
    if t.__class__ is Jump and t.body.__class__ is App:
        x, u = t.binder, t.content
        t0, v = t.body.fun, t.body.arg
        if not occurs(x, v):
            return [(App(Jump(t0, x, u), v), None)]
    return []


def _in3(t, params):
    if t.__class__ is Jump and t.body.__class__ is App:
        x, u = t.binder, t.content
        t0, v = t.body.fun, t.body.arg
        if not occurs(x, t0) and occurs(x, v):
            return [(App(t0, Jump(v, x, u)), None)]
    return []


def _in4(t, params):
    # t[y/v][x/u] -> t[y/v[x/u]]
    if t.__class__ is Jump and t.body.__class__ is Jump:
        x, u = t.binder, t.content
        t0, y, v = t.body.body, t.body.binder, t.body.content
        if x != y and not occurs(x, t0) and occurs(x, v):
            return [(Jump(t0, y, Jump(v, x, u)), None)]
    return []


register_rule("in1", ("j",), _in1, doc="(λy.t)[x/u] -> λy.(t[x/u])")
register_rule("in2", ("j",), _in2, doc="(t v)[x/u] -> t[x/u] v if x∉fv(v)")
register_rule("in3", ("j",), _in3, doc="(t v)[x/u] -> t v[x/u] if x∉fv(t), x∈fv(v)")
register_rule("in4", ("j",), _in4, doc="t[y/v][x/u] -> t[y/v[x/u]] if x∉fv(t), x∈fv(v)")


# ---------------------------------------------------------------- outer propagations

def _out1(t, params):
    # λy.(t[x/u]) -> (λy.t)[x/u]  if y∉fv(u)
    if t.__class__ is Lam and t.body.__class__ is Jump:
        y = t.binder
        j = t.body
        if occurs(y, j.content):
            return []
        x, body = freshen(j.binder, j.body, {y})
        return [(Jump(Lam(y, body), x, j.content), None)]
    return []


def _out2(t, params):
    # t[x/u] v -> (t v)[x/u]
    if t.__class__ is App and t.fun.__class__ is Jump:
        j, v = t.fun, t.arg
        x, body = freshen(j.binder, j.body, v.free_vars())
        return [(Jump(App(body, v), x, j.content), None)]
    return []


def _out3(t, params):
    # t v[x/u] -> (t v)[x/u]
    if t.__class__ is App and t.arg.__class__ is Jump:
        t0, j = t.fun, t.arg
        x, body = freshen(j.binder, j.body, t0.free_vars())
        return [(Jump(App(t0, body), x, j.content), None)]
    return []


def _out4(t, params):
    # t[y/v[x/u]] -> t[y/v][x/u]
    if t.__class__ is Jump and t.content.__class__ is Jump:
        t0, y, c = t.body, t.binder, t.content
        x, v = freshen(c.binder, c.body, all_names(t0) | {y})
        return [(Jump(Jump(t0, y, v), x, c.content), None)]
    return []


register_rule("out1", ("j",), _out1, doc="λy.(t[x/u]) -> (λy.t)[x/u] if y∉fv(u)")
register_rule("out2", ("j",), _out2, doc="t[x/u] v -> (t v)[x/u]")
register_rule("out3", ("j",), _out3, doc="t v[x/u] -> (t v)[x/u]")
register_rule("out4", ("j",), _out4, doc="t[y/v[x/u]] -> t[y/v][x/u]")


# ---------------------------------------------------------------- explicit substitutions with propagation

def _les_B(t, params):
    if t.__class__ is App and t.fun.__class__ is Lam:
        return [(Jump(t.fun.body, t.fun.binder, t.arg), None)]
    return []


def _les_d(t, params):
    if t.__class__ is Jump and t.body.__class__ is Var and t.body.name == t.binder:
        return [(t.content, None)]
    return []


def _les_w(t, params):
    if t.__class__ is Jump and not occurs(t.binder, t.body):
        return [(t.body, None)]
    return []


def _les_app(left: bool, right: bool):
    def fn(t, params):
        if t.__class__ is Jump and t.body.__class__ is App:
            x, u = t.binder, t.content
            t0, v = t.body.fun, t.body.arg
            if occurs(x, t0) == left and occurs(x, v) == right:
                return [(App(Jump(t0, x, u) if left else t0, Jump(v, x, u) if right else v), None)]
        return []

    return fn


def _les_comp(both: bool):
    # t[x/u][y/v] -> t[x/u[y/v]]        if y∉fv(t), y∈fv(u)   (comp1)
    # t[x/u][y/v] -> t[y/v][x/u[y/v]]   if y∈fv(t), y∈fv(u)   (comp2)
    def fn(t, params):
        if t.__class__ is Jump and t.body.__class__ is Jump:
            y, v = t.binder, t.content
            t0, x, u = t.body.body, t.body.binder, t.body.content
            if x == y or not occurs(y, u) or occurs(y, t0) != both:
                return []
            inner = Jump(u, y, v)
            if both:
                x2, t1 = freshen(x, t0, {y} | v.free_vars())
                return [(Jump(Jump(t1, y, v), x2, inner), None)]
            return [(Jump(t0, x, inner), None)]
        return []

    return fn


register_rule("les:B", ("j",), _les_B, doc="(λx.t) u -> t[x/u]")
register_rule("les:d'", ("j",), _les_d, doc="x[x/u] -> u")
register_rule("les:w", ("j",), _les_w, doc="t[x/u] -> t if x∉fv(t)")
register_rule("les:@r", ("j",), _les_app(False, True), doc="(t v)[x/u] -> t v[x/u] if x∉fv(t), x∈fv(v)")
register_rule("les:@l", ("j",), _les_app(True, False), doc="(t v)[x/u] -> t[x/u] v if x∈fv(t), x∉fv(v)")
register_rule("les:@", ("j",), _les_app(True, True), doc="(t v)[x/u] -> t[x/u] v[x/u] if x∈fv(t), x∈fv(v)")
register_rule("les:lam", ("j",), _in1, doc="(λy.t)[x/u] -> λy.(t[x/u])")
register_rule("les:comp1", ("j",), _les_comp(False), doc="t[x/u][y/v] -> t[x/u[y/v]] if y∉fv(t), y∈fv(u)")
register_rule("les:comp2", ("j",), _les_comp(True), doc="t[x/u][y/v] -> t[y/v][x/u[y/v]] if y∈fv(t), y∈fv(u)")

LES_RULES = ("les:B", "les:d'", "les:w", "les:@r", "les:@l", "les:@", "les:lam", "les:comp1", "les:comp2")
IN_RULES = ("in1", "in2", "in3", "in4")
OUT_RULES = ("out1", "out2", "out3", "out4")
LAMBDAJ_RULES = ("dB", "w", "d", "c")


# ---------------------------------------------------------------- catalogue

CALCULI = {
    "beta": lambda: RewriteSystem("beta", ("beta",), (), universe="lambda"),
    "lambdaj": lambdaj_system,
    "lambdaj_o": lambda: RewriteSystem("lambdaj_o", LAMBDAJ_RULES, O),
    "lambdaj_obox": lambda: RewriteSystem("lambdaj_obox", LAMBDAJ_RULES, OBOX),
    "lambdaj_n": lambda: RewriteSystem("lambdaj_n", LAMBDAJ_RULES, N),
    "void": void_system,
    "lambdaj_obox_u": lambda: RewriteSystem("lambdaj_obox_u", LAMBDAJ_RULES + ("u",), OBOX),
    "inner": lambda: RewriteSystem("inner", LAMBDAJ_RULES + IN_RULES, CS),
    "outer": lambda: RewriteSystem("outer", LAMBDAJ_RULES + OUT_RULES, CS),
    "les": lambda: RewriteSystem("les", LES_RULES, CS),
    "permutative": lambda: RewriteSystem(
        "permutative", ("beta", "uhat"), ("sigmahat1", "sigmahat2", "boxhat"), universe="lambda"
    ),
    "structural_modulo": lambda: RewriteSystem("structural_modulo", LAMBDAJ_RULES + ("u", "uhat"), PI),
    # subsystems used by the suites
    "j": j_system,
    "j_o": lambda: RewriteSystem("j_o", ("w", "d", "c"), O),
    "j_obox": lambda: RewriteSystem("j_obox", ("w", "d", "c"), OBOX),
    "notgc": notgc_system,
    "in": lambda: RewriteSystem("in", IN_RULES, CS),
    "out": lambda: RewriteSystem("out", OUT_RULES, CS),
}

PRIMARY_CALCULI = (
    "beta",
    "lambdaj",
    "lambdaj_o",
    "lambdaj_obox",
    "lambdaj_n",
    "void",
    "lambdaj_obox_u",
    "inner",
    "outer",
    "les",
    "permutative",
    "structural_modulo",
)


def build(c: str, params: RewriteParams | None = None) -> RewriteSystem:
    """The rewrite system named ``c``."""
    if c not in CALCULI:
        raise RewriteError(f"unknown calculus {c!r}; choose from {', '.join(CALCULI)}")
    sys = CALCULI[c]()
    if params is not None:
        sys = RewriteSystem(sys.name, sys.rules, sys.axioms, sys.universe, params)
    return sys


# ---------------------------------------------------------------- simulations

def lift(trace: Trace, outer: Term, p: tuple) -> Trace:
    """Replay a trace of the subterm at ``p`` inside ``outer``."""
    p = tuple(p)
    outer = alpha_canonical(outer)
    steps = []
    for st in trace.steps:
        src = alpha_canonical(replace_at(outer, p, st.source))
        tgt = alpha_canonical(replace_at(outer, p, st.target))
        steps.append(Step(src, tgt, st.kind, st.name, p + st.position, st.choice))
    return Trace(alpha_canonical(replace_at(outer, p, trace.initial)), steps)


def simulate_les_step(t: Term, s: Step, budget: int = 6) -> Trace:
    """An inner-calculus trace (modulo CS) from ``t`` to a term ≡CS ``s.target``.

    The search runs on the redex and is lifted back into the context.
    """
    if s.kind != "rule" or s.name not in LES_RULES:
        raise RewriteError(f"{s.describe()} is not a λes rule step")
    t = alpha_canonical(t)
    sub = subterm_at(t, s.position)
    reduct = alpha_canonical(subterm_at(alpha_canonical(s.target), s.position))
    inner = build("inner")
    q = quotient_for(inner.axioms)
    goal = q.rep(reduct)
    tr, depth, states = search_rule_steps(inner, sub, goal, budget)
    if tr is None:
        raise RewriteError(f"no simulation of {s.describe()} within {budget} rule steps")
    tr.steps.extend(q.path(tr.final, reduct))
    return lift(tr, t, s.position)


def search_rule_steps(sys: RewriteSystem, start: Term, goal_rep: Term, budget: int, max_states: int = 50_000):
    """Search at least one rule step from ``start`` to the class ``goal_rep``."""
    q = quotient_for(sys.axioms)
    start = alpha_canonical(start)
    best = None
    states = 0
    for st, r in modulo_steps(sys, start, q):
        sub, depth, n = search_modulo(sys, st.target, lambda x: x == goal_rep, budget - 1, max_states)
        states += n
        if sub is not None and (best is None or depth + 1 < best[1]):
            head = Trace(start, q.path(start, st.source) + [st])
            best = (head.extend(sub), depth + 1)
    if best is None:
        return None, budget, states
    return best[0], best[1], states


def beta_norm_of_class(t: Term) -> int:
    """Maximal β-reduction length (raises if ``t`` is not β-SN)."""
    if not is_lambda_term(t):
        raise ValueError("the β norm is defined on λ-terms")
    return eta(build("beta"), t)


def simulate_permutative_step(t: Term, s: Step, budget: int = 8, params: RewriteParams | None = None) -> Trace:
    """A structural-modulo trace of at least one step from ``t`` into the Π-class of ``s.target``."""
    sm = build("structural_modulo", params)
    q = quotient_for(sm.axioms)
    goal = q.rep(s.target)
    tr, depth, states = search_rule_steps(sm, t, goal, budget)
    if tr is None:
        raise RewriteError(f"no simulation of {s.describe()} within {budget} rule steps")
    tr.steps.extend(q.path(tr.final, s.target))
    return tr


def normal_form_modulo(sys: RewriteSystem, t: Term, max_steps: int = 10_000) -> Term:
    """Follow the first successor class until none remains."""
    q = quotient_for(sys.axioms)
    cur = q.rep(t)
    for _ in range(max_steps):
        nxt = modulo_steps(sys, cur, q)
        if not nxt:
            return cur
        cur = nxt[0][1]
    raise RewriteError(f"no normal form within {max_steps} steps")


def propagation_normal_form(kind: str, t: Term) -> Term:
    """The in- or out-normal form modulo CS (``kind`` is 'in' or 'out')."""
    return normal_form_modulo(build(kind), t)
