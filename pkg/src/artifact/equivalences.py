"""Equational theories on terms with jumps and on pure lambda-terms.

Axioms are symmetric relations; each root function returns the neighbours
reachable by one application in either direction.

Named sets:

* ``CS``: commutation of independent jumps
* ``O``: CS plus jump/lambda and jump/application-function permutations
* ``BOX``: moving a jump in or out of an application argument or a jump
  content
* ``OBOX = O | BOX``
* ``N``: O plus the unconditional box moves (unsound, kept for the
  non-termination example)
* ``SIGMA_HAT``: Regnier's permutations of pure beta-redexes
* ``PI``: OBOX plus the redex-level counterparts of SIGMA_HAT and BOX
"""

from __future__ import annotations

from .rewrite import (
    AXIOMS,
    Quotient,
    canonical_id,
    register_axiom,
)
from .term import (
    App,
    Jump,
    Lam,
    Term,
    VoidJump,
    all_names,
    alpha_canonical,
    children,
    fresh_name,
    is_lambda_term,
    make_jump,
    multiplicity,
    rename_free,
    replace_at,
)


def jump_parts(t: Term):
    """``(body, binder, content)`` for a jump (binder None when void)."""
    c = t.__class__
    if c is Jump:
        return t.body, t.binder, t.content
    if c is VoidJump:
        return t.body, None, t.content
    return None


def occurs(x, t: Term) -> bool:
    return x is not None and x in t.free_vars()


def freshen(binder, body: Term, avoid) -> tuple:
    """Rename ``binder`` (bound in ``body``) away from the names in ``avoid``."""
    if binder is None or binder not in avoid:
        return binder, body
    z = fresh_name(set(avoid) | all_names(body) | {binder}, binder)
    return z, rename_free(body, binder, z)


# ---------------------------------------------------------------- graphical

def _cs(t):
    jp = jump_parts(t)
    if jp is None:
        return []
    inner, y, v = jp
    ip = jump_parts(inner)
    if ip is None:
        return []
    t0, x, s = ip
    if x is not None and x == y:
        return []
    if occurs(x, v) or occurs(y, s):
        return []
    return [(make_jump(make_jump(t0, y, v), x, s), "<->")]


def _sigma1(t):
    out = []
    if t.__class__ is Lam:
        jp = jump_parts(t.body)
        if jp is not None:
            t0, x, s = jp
            y = t.binder
            if not occurs(y, s) and x != y:
                out.append((make_jump(Lam(y, t0), x, s), "->"))
    jp = jump_parts(t)
    if jp is not None and jp[0].__class__ is Lam:
        lam, x, s = jp
        y, t0 = freshen(lam.binder, lam.body, {x} if x else ())
        if not occurs(y, s):
            out.append((Lam(y, make_jump(t0, x, s)), "<-"))
    return out


def _sigma2(t):
    out = []
    if t.__class__ is App:
        jp = jump_parts(t.fun)
        if jp is not None:
            t0, x, s = jp
            v = t.arg
            if not occurs(x, v):
                out.append((make_jump(App(t0, v), x, s), "->"))
    jp = jump_parts(t)
    if jp is not None and jp[0].__class__ is App:
        app, x, s = jp
        if not occurs(x, app.arg):
            out.append((App(make_jump(app.fun, x, s), app.arg), "<-"))
    return out


# ---------------------------------------------------------------- box

def _box1(t, need_v=True):
    out = []
    if t.__class__ is Jump and t.body.__class__ is App:
        t0, v = t.body.fun, t.body.arg
        x, u = t.binder, t.content
        if not occurs(x, t0) and (occurs(x, v) or not need_v):
            out.append((App(t0, Jump(v, x, u)), "->"))
    if t.__class__ is App and t.arg.__class__ is Jump:
        t0 = t.fun
        v, x, u = t.arg.body, t.arg.binder, t.arg.content
        if not occurs(x, t0) and (occurs(x, v) or not need_v):
            out.append((Jump(App(t0, v), x, u), "<-"))
    return out


def _box2(t, need_v=True):
    out = []
    if t.__class__ is Jump and t.body.__class__ is Jump:
        inner = t.body
        t0, y, v = inner.body, inner.binder, inner.content
        x, u = t.binder, t.content
        if x != y and not occurs(x, t0) and (occurs(x, v) or not need_v):
            out.append((Jump(t0, y, Jump(v, x, u)), "->"))
    if t.__class__ is Jump and t.content.__class__ is Jump:
        t0, y = t.body, t.binder
        c = t.content
        # the content's binder joins the scope of y: keep the names apart
        x, v = freshen(c.binder, c.body, {y} | t0.free_vars())
        u = c.content
        if not occurs(x, t0) and (occurs(x, v) or not need_v):
            out.append((Jump(Jump(t0, y, v), x, u), "<-"))
    return out


def _box1_0(t):
    return _box1(t, need_v=False)


def _box2_0(t):
    return _box2(t, need_v=False)


# ---------------------------------------------------------------- redex permutations

def _sigmahat1(t):
    out = []
    # (λx.λy.t) u  <->  λy.((λx.t) u)   if y ∉ fv(u)
    if t.__class__ is App and t.fun.__class__ is Lam and t.fun.body.__class__ is Lam:
        x = t.fun.binder
        y, t0 = t.fun.body.binder, t.fun.body.body
        u = t.arg
        if not occurs(y, u) and x != y:
            out.append((Lam(y, App(Lam(x, t0), u)), "->"))
    if t.__class__ is Lam and t.body.__class__ is App and t.body.fun.__class__ is Lam:
        y = t.binder
        x, t0 = t.body.fun.binder, t.body.fun.body
        u = t.body.arg
        if not occurs(y, u) and x != y:
            out.append((App(Lam(x, Lam(y, t0)), u), "<-"))
    return out


def _sigmahat2(t):
    out = []
    # (λx.(t v)) u  <->  (λx.t) u v   if x ∉ fv(v)
    if t.__class__ is App and t.fun.__class__ is Lam and t.fun.body.__class__ is App:
        x = t.fun.binder
        t0, v = t.fun.body.fun, t.fun.body.arg
        u = t.arg
        if not occurs(x, v):
            out.append((App(App(Lam(x, t0), u), v), "->"))
    if (
        t.__class__ is App
        and t.fun.__class__ is App
        and t.fun.fun.__class__ is Lam
    ):
        lam, u, v = t.fun.fun, t.fun.arg, t.arg
        x, t0 = freshen(lam.binder, lam.body, v.free_vars())
        if not occurs(x, v):
            out.append((App(Lam(x, App(t0, v)), u), "<-"))
    return out


def _boxhat(t):
    out = []
    # (λx.(t v)) u  <->  t ((λx.v) u)   if x ∉ fv(t) and x ∈ fv(v)
    if t.__class__ is App and t.fun.__class__ is Lam and t.fun.body.__class__ is App:
        x = t.fun.binder
        t0, v = t.fun.body.fun, t.fun.body.arg
        u = t.arg
        if not occurs(x, t0) and occurs(x, v):
            out.append((App(t0, App(Lam(x, v), u)), "->"))
    if t.__class__ is App and t.arg.__class__ is App and t.arg.fun.__class__ is Lam:
        t0 = t.fun
        lam, u = t.arg.fun, t.arg.arg
        x, v = freshen(lam.binder, lam.body, t0.free_vars())
        if not occurs(x, t0) and occurs(x, v):
            out.append((App(Lam(x, App(t0, v)), u), "<-"))
    return out


_JV = ("j", "void")
register_axiom("CS", _JV, _cs, doc="t[x/s][y/v] ~ t[y/v][x/s] if x∉fv(v), y∉fv(s)")
register_axiom("sigma1", _JV, _sigma1, doc="λy.(t[x/s]) ~ (λy.t)[x/s] if y∉fv(s)")
register_axiom("sigma2", _JV, _sigma2, doc="t[x/s] v ~ (t v)[x/s] if x∉fv(v)")
register_axiom("box1", ("j",), _box1, doc="(t v)[x/u] ~ t v[x/u] if x∉fv(t), x∈fv(v)")
register_axiom("box2", ("j",), _box2, doc="t[y/v][x/u] ~ t[y/v[x/u]] if x∉fv(t), x∈fv(v)")
register_axiom("box1_0", ("j",), _box1_0, doc="(t v)[x/u] ~ t v[x/u] if x∉fv(t)")
register_axiom("box2_0", ("j",), _box2_0, doc="t[y/v][x/u] ~ t[y/v[x/u]] if x∉fv(t)")
register_axiom("sigmahat1", ("lambda", "j"), _sigmahat1, doc="(λx.λy.t)u ~ λy.((λx.t)u) if y∉fv(u)")
register_axiom("sigmahat2", ("lambda", "j"), _sigmahat2, doc="(λx.t v)u ~ (λx.t)u v if x∉fv(v)")
register_axiom("boxhat", ("lambda", "j"), _boxhat, doc="(λx.t v)u ~ t((λx.v)u) if x∉fv(t), x∈fv(v)")

CS = ("CS",)
O = ("CS", "sigma1", "sigma2")
BOX = ("box1", "box2")
OBOX = O + BOX
N = O + ("box1_0", "box2_0")
SIGMA_HAT = ("sigmahat1", "sigmahat2")
PI = OBOX + ("sigmahat1", "sigmahat2", "boxhat")

AXIOM_SETS = {
    "none": (),
    "CS": CS,
    "o": O,
    "box": BOX,
    "obox": OBOX,
    "n": N,
    "sigmahat": SIGMA_HAT,
    "pi": PI,
}


def axiom_set(name: str) -> tuple:
    """Resolve a set name ('o', 'obox', ...) or a comma-separated id list."""
    if name in AXIOM_SETS:
        return AXIOM_SETS[name]
    ids = tuple(canonical_id(a.strip()) for a in name.split(",") if a.strip())
    for a in ids:
        if a not in AXIOMS:
            raise ValueError(f"unknown axiom or axiom set {a!r}")
    return ids


def equivalent(axioms, t: Term, u: Term) -> bool:
    return Quotient(axioms).equivalent(t, u)


def sigma_hat_class(t: Term) -> frozenset:
    if not is_lambda_term(t):
        raise ValueError("the σ̂ class is defined on pure lambda-terms")
    return Quotient(SIGMA_HAT).members(t)


# ---------------------------------------------------------------- global forms

def _spine_descendants(t: Term, path=(), bound=frozenset()):
    """Positions reachable from ``t`` through spine edges only (with binders)."""
    yield path, t, bound
    c = t.__class__
    if c is Lam:
        yield from _spine_descendants(t.body, path + (1,), bound | {t.binder})
    elif c is App:
        yield from _spine_descendants(t.fun, path + (1,), bound)
    elif c is Jump:
        yield from _spine_descendants(t.body, path + (1,), bound | {t.binder})
    elif c is VoidJump:
        yield from _spine_descendants(t.body, path + (1,), bound)


def _all_descendants(t: Term, path=(), bound=frozenset()):
    yield path, t, bound
    c = t.__class__
    if c is Lam:
        yield from _all_descendants(t.body, path + (1,), bound | {t.binder})
    elif c is App:
        yield from _all_descendants(t.fun, path + (1,), bound)
        yield from _all_descendants(t.arg, path + (2,), bound)
    elif c is Jump:
        yield from _all_descendants(t.body, path + (1,), bound | {t.binder})
        yield from _all_descendants(t.content, path + (2,), bound)
    elif c is VoidJump:
        yield from _all_descendants(t.body, path + (1,), bound)
        yield from _all_descendants(t.content, path + (2,), bound)


def _global_moves(t: Term, spine_only_when, general_when):
    """Root-level global permutations ``C[s[x/u]] ~ C[s][x/u]``, both ways.

    ``spine_only_when(k_inner, k_outer)`` and ``general_when(...)`` decide
    which multiplicity pairs allow a move through a spine or a general
    context respectively.
    """
    out = []
    # outward: pull a jump found below the root up to the root
    for walk, allow in ((_spine_descendants, spine_only_when), (_all_descendants, general_when)):
        if allow is None:
            continue
        for p, s, bound in walk(t):
            if not p:
                continue
            jp = jump_parts(s)
            if jp is None:
                continue
            body, x, u = jp
            if bound & u.free_vars():
                continue
            plugged = replace_at(t, p, body)
            k_in = multiplicity(body, x) if x else 0
            k_out = multiplicity(plugged, x) if x else 0
            if x is not None and x in bound:
                continue
            if allow(k_in, k_out):
                y, plugged2 = freshen(x, plugged, plugged.free_vars() - body.free_vars())
                out.append(make_jump(plugged2, y, u))
    # inward: push the root jump down to some position of its body
    jp = jump_parts(t)
    if jp is not None:
        body, x, u = jp
        for walk, allow in ((_spine_descendants, spine_only_when), (_all_descendants, general_when)):
            if allow is None:
                continue
            for p, s, bound in walk(body):
                if not p or bound & u.free_vars():
                    continue
                if x is not None and x in bound:
                    continue
                k_in = multiplicity(s, x) if x else 0
                k_out = multiplicity(body, x) if x else 0
                if allow(k_in, k_out):
                    out.append(replace_at(body, p, make_jump(s, x, u)))
    return out


def _closure_of(t: Term, moves) -> frozenset:
    t = alpha_canonical(t)
    seen = {t}
    todo = [t]
    while todo:
        s = todo.pop()
        for p, sub in _positions(s):
            for res in moves(sub):
                new = alpha_canonical(replace_at(s, p, res))
                if new not in seen:
                    seen.add(new)
                    todo.append(new)
    return frozenset(seen)


def _positions(t, p=()):
    yield p, t
    for i, k in enumerate(children(t), 1):
        yield from _positions(k, p + (i,))


def spine_global_o_class(t: Term) -> frozenset:
    """Closure under ``S[s[x/u]] ~ S[s][x/u]`` with ``|s|_x = |S[s]|_x``."""
    return _closure_of(t, lambda s: _global_moves(s, lambda a, b: a == b, None))


def spine_global_o_equal(t: Term, u: Term) -> bool:
    return alpha_canonical(u) in spine_global_o_class(t)


def global_obox_class(t: Term) -> frozenset:
    """Closure under the two global substitution-equivalence clauses.

    A general context when ``|s|_x = |C[s]|_x > 0``, a spine context when
    both are 0.
    """
    return _closure_of(
        t,
        lambda s: _global_moves(
            s,
            lambda a, b: a == b == 0,
            lambda a, b: a == b > 0,
        ),
    )

