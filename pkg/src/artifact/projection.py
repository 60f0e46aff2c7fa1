"""Projection of jump terms onto void terms, and checkers for how steps project.

``gc_project`` substitutes every jump whose variable occurs and turns the
others into void jumps.  A step ``t0 -> t1`` of the calculus with jumps
projects as follows:

* ``dB`` becomes one or more ``void:beta``/``void:dB`` steps
* ``w``, ``d``, ``c`` and the unboxing rule ``u`` become zero or more
  ``h``/``void:u`` steps modulo ≡o
* a graphical axiom (CS, σ1, σ2) becomes ≡o
* box1/box2 vanish: both sides have the same projection
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .equivalences import O
from .rewrite import (
    RewriteSystem,
    Step,
    Trace,
    modulo_steps,
    quotient_for,
    search_modulo,
    validate_trace,
)
from .term import App, Jump, Lam, Term, Var, VoidJump, alpha_canonical, subst

DEFAULT_BUDGET = 6


def gc_project(t: Term) -> Term:
    """The non-erasing projection onto void terms."""
    return alpha_canonical(_gc(t))


def _gc(t):
    c = t.__class__
    if c is Var:
        return t
    if c is Lam:
        return Lam(t.binder, _gc(t.body))
    if c is App:
        return App(_gc(t.fun), _gc(t.arg))
    if c is Jump:
        body = _gc(t.body)
        if t.binder in t.body.free_vars():
            return subst(body, t.binder, _gc(t.content))
        return VoidJump(body, _gc(t.content))
    if c is VoidJump:
        return VoidJump(_gc(t.body), _gc(t.content))
    raise TypeError(t)


# clause -> (rules used by the witness, whether at least one step is needed)
CLAUSES = {
    "dB": (("void:beta", "void:dB"), True),
    "erase": (("h", "void:u"), False),
    "o": ((), False),
    "box": (None, False),
}

_RULE_CLAUSE = {"dB": "dB", "w": "erase", "d": "erase", "c": "erase", "u": "erase"}
_AXIOM_CLAUSE = {"CS": "o", "sigma1": "o", "sigma2": "o", "box1": "box", "box2": "box"}


@dataclass
class ProjectionVerdict:
    clause: str
    ok: bool
    source: Term
    target: Term
    witness: Trace | None = None
    equal: bool = False
    steps_used: int = 0
    states: int = 0
    message: str = ""
    millis: float = field(default=0.0, compare=False)


def clause_of(step: Step) -> str:
    table = _RULE_CLAUSE if step.kind == "rule" else _AXIOM_CLAUSE
    if step.name not in table:
        raise ValueError(f"no projection clause for {step.kind} {step.name}")
    return table[step.name]


def check_projection_step(t0: Term, step: Step, budget: int = DEFAULT_BUDGET, h_cap: int = 3) -> ProjectionVerdict:
    """Find a void-calculus witness for how ``step`` projects.

    ``budget`` bounds the number of rule steps in the witness.
    """
    started = time.perf_counter()
    clause = clause_of(step)
    g0 = gc_project(t0)
    g1 = gc_project(step.target)
    v = ProjectionVerdict(clause, False, g0, g1)
    if clause == "box":
        v.equal = g0 == g1
        v.ok = v.equal
        v.message = "" if v.ok else "projections differ"
    elif clause == "o":
        q = quotient_for(O)
        v.equal = g0 == g1
        if q.equivalent(g0, g1):
            v.witness = Trace(g0, q.path(g0, g1))
            v.ok = True
        else:
            v.message = "projections are not ≡o-equivalent"
    else:
        rules, need_step = CLAUSES[clause]
        sys = RewriteSystem(f"proj-{clause}", rules, O, universe="void").with_params(h_cap=h_cap)
        v.equal = g0 == g1
        q = quotient_for(O)
        goal = q.rep(g1)
        if need_step:
            # at least one rule step: search from the successors
            found, depth, states = _search_plus(sys, g0, goal, budget)
        else:
            found, depth, states = search_modulo(sys, g0, lambda r: r == goal, budget)
        v.states = states
        if found is not None:
            found.steps.extend(q.path(found.final, g1))
            validate_trace(found, sys)
            v.witness = found
            v.steps_used = len(found.rule_steps())
            v.ok = not need_step or v.steps_used > 0
        else:
            v.message = f"no witness within {budget} steps ({states} states)"
    v.millis = (time.perf_counter() - started) * 1000
    return v


def _search_plus(sys: RewriteSystem, g0: Term, goal: Term, budget: int):
    """Like ``search_modulo`` but the witness must contain a rule step."""
    q = quotient_for(sys.axioms)
    g0 = alpha_canonical(g0)
    best = None
    states = 0
    for st, r in modulo_steps(sys, g0, q):
        sub, depth, n = search_modulo(sys, st.target, lambda x: x == goal, budget - 1)
        states += n
        if sub is not None and (best is None or depth + 1 < best[1]):
            head = Trace(g0, q.path(g0, st.source) + [st])
            best = (head.extend(sub), depth + 1)
    if best is None:
        return None, budget, states
    return best[0], best[1], states


def projection_table() -> list:
    """The four w-steps used to illustrate the projection, with their images."""
    from .syntax import parse

    rows = [
        ("f[y/x][x/u]", "f[x/u]"),
        ("f[y/x z][x/u][z/v]", "f[x/u][z/v]"),
        ("f[y/x x][x/u]", "f[x/u]"),
        ("(f[w/f[y/x z]] g)[x/u][z/v]", "(f[w/f] g)[x/u][z/v]"),
    ]
    out = []
    for a, b in rows:
        t, t1 = parse(a), parse(b)
        out.append((t, t1, gc_project(t), gc_project(t1)))
    return out
