"""The memory calculus with void jumps and its trunk/surface machinery.

Rules (``L`` is a list of void jumps):

* ``void:beta``: ``(λx.t)L u -> t{x/u}L`` when ``x`` occurs in ``t``
* ``void:dB``: ``(λx.t)L u -> t[_/u]L`` when ``x`` does not occur in ``t``
* ``h``: ``t[_/u] -> t[_/u1]...[_/un]`` where every ``ui`` is a strict
  subterm of ``u`` with ``fv(ui) ⊆ fv(u)`` and ``n >= 0``
* ``void:u``: ``B[t[_/u]] -> B[t][_/u]`` for a boxed context ``B`` binding
  no free variable of ``u``

The system works modulo the graphical equivalence restricted to void jumps.
The h-rule is infinitely branching; enumeration stops at ``params.h_cap``
jumps and, since the calculus works modulo CS, emits each multiset of
replacement contents once.
"""

from __future__ import annotations

from collections import deque
from itertools import combinations_with_replacement

from .equivalences import O
from .lambdaj import unboxing_rule, peel_jumps, rewrap
from .measures import DivergenceError, NatMultiset, eta
from .rewrite import (
    RewriteParams,
    RewriteSystem,
    modulo_steps,
    one_step_reducts,
    quotient_for,
    register_rule,
)
from .term import App, Lam, Term, Var, VoidJump, alpha_canonical, children, subst


# ---------------------------------------------------------------- rules

def _vbeta(t, params):
    if t.__class__ is not App:
        return []
    m = peel_jumps(t.fun, VoidJump)
    if m is None:
        return []
    lam, L = m
    if lam.binder not in lam.body.free_vars():
        return []
    return [(rewrap(subst(lam.body, lam.binder, t.arg), L, VoidJump), None)]


def _vdB(t, params):
    if t.__class__ is not App:
        return []
    m = peel_jumps(t.fun, VoidJump)
    if m is None:
        return []
    lam, L = m
    if lam.binder in lam.body.free_vars():
        return []
    return [(rewrap(VoidJump(lam.body, t.arg), L, VoidJump), None)]


def strict_subterms(u: Term) -> list:
    """Distinct strict subterms of ``u``, in a fixed order."""
    seen = set()
    stack = list(children(u))
    while stack:
        s = stack.pop()
        seen.add(alpha_canonical(s))
        stack.extend(children(s))
    return sorted(seen, key=Term.sort_key)


def hydra_candidates(u: Term) -> list:
    """Strict subterms of ``u`` whose free variables are free in ``u``."""
    fvu = u.free_vars()
    return [s for s in strict_subterms(u) if s.free_vars() <= fvu]


def _stack_jumps(body: Term, contents) -> Term:
    for c in contents:
        body = VoidJump(body, c)
    return body


def _h(t, params):
    if t.__class__ is not VoidJump:
        return []
    cands = hydra_candidates(t.content)
    out = []
    for n in range(params.h_cap + 1):
        for combo in combinations_with_replacement(cands, n):
            out.append((_stack_jumps(t.body, combo), combo))
    return out


def _h_replay(t, choice, params):
    if t.__class__ is not VoidJump:
        return None
    combo = tuple(choice)
    if len(combo) > params.h_cap:
        return None
    allowed = set(hydra_candidates(t.content))
    if any(alpha_canonical(c) not in allowed for c in combo):
        return None
    return _stack_jumps(t.body, combo)


register_rule("void:beta", ("void",), _vbeta, doc="(λx.t)L u -> t{x/u}L if x∈fv(t)")
register_rule("void:dB", ("void",), _vdB, doc="(λx.t)L u -> t[_/u]L if x∉fv(t)")
register_rule("h", ("void",), _h, replay=_h_replay, doc="t[_/u] -> t[_/u1]...[_/un], ui strict subterms of u")
_vu_fn, _vu_replay = unboxing_rule(VoidJump)
register_rule("void:u", ("void",), _vu_fn, replay=_vu_replay, doc="B[t[_/u]] -> B[t][_/u], B does not bind u")

VOID_RULES = ("void:beta", "void:dB", "h", "void:u")


def void_system(h_cap: int = 3) -> RewriteSystem:
    if h_cap < 0:
        raise ValueError("h_cap must be non-negative")
    return RewriteSystem("void", VOID_RULES, O, universe="void", params=RewriteParams(h_cap=h_cap))


# ---------------------------------------------------------------- trunk and surface

def trunk(gamma, t: Term) -> Term:
    """``surf_Γ(t)``: drop the void jumps whose content avoids ``Γ``.

    Only the spine is visited: arguments and kept contents are untouched.
    """
    gamma = frozenset(gamma)
    c = t.__class__
    if c is Var:
        return t
    if c is App:
        return App(trunk(gamma, t.fun), t.arg)
    if c is Lam:
        return Lam(t.binder, trunk(gamma | {t.binder}, t.body))
    if c is VoidJump:
        body = trunk(gamma, t.body)
        if t.content.free_vars() & gamma:
            return VoidJump(body, t.content)
        return body
    raise TypeError("the trunk is defined on void terms")


_SN_MEMO: dict = {}
_ETA_MEMO: dict = {}


def void_eta(u: Term, h_cap: int = 3) -> int:
    """Longest λ-void/o reduction from ``u`` (memoised per ``h_cap``)."""
    u = alpha_canonical(u)
    key = (u, h_cap)
    if key not in _ETA_MEMO:
        _ETA_MEMO[key] = eta(void_system(h_cap), u)
    return _ETA_MEMO[key]


def void_sn(u: Term, h_cap: int = 3) -> bool:
    """Exhaustive SN check for λ-void/o.  Cap overruns propagate as errors."""
    u = alpha_canonical(u)
    key = (u, h_cap)
    if key not in _SN_MEMO:
        try:
            void_eta(u, h_cap)
            _SN_MEMO[key] = True
        except DivergenceError:
            _SN_MEMO[key] = False
    return _SN_MEMO[key]


def surface_sn(gamma, t: Term, sn_oracle=None) -> bool:
    """The predicate: every surface jump of ``t`` has an SN content."""
    sn = sn_oracle or void_sn
    gamma = frozenset(gamma)
    c = t.__class__
    if c is Var:
        return True
    if c is App:
        return surface_sn(gamma, t.fun, sn)
    if c is Lam:
        return surface_sn(gamma | {t.binder}, t.body, sn)
    if c is VoidJump:
        if t.content.free_vars() & gamma:
            return surface_sn(gamma, t.body, sn)
        return surface_sn(gamma, t.body, sn) and sn(t.content)
    raise TypeError("the surface predicate is defined on void terms")


def surface_measure(gamma, t: Term, eta_fn=None) -> NatMultiset:
    """Multiset of pairs ``(η(u), |u|)`` for the surface jump contents ``u``."""
    ev = eta_fn or void_eta
    gamma = frozenset(gamma)
    c = t.__class__
    if c is Var:
        return NatMultiset()
    if c is App:
        return surface_measure(gamma, t.fun, ev) | surface_measure(gamma, t.arg, ev)
    if c is Lam:
        return surface_measure(gamma | {t.binder}, t.body, ev)
    if c is VoidJump:
        rest = surface_measure(gamma, t.body, ev)
        if t.content.free_vars() & gamma:
            return rest | surface_measure(gamma, t.content, ev)
        return rest | NatMultiset.of((ev(t.content), t.content.size))
    raise TypeError("the surface measure is defined on void terms")


# ---------------------------------------------------------------- step lemma

def reaches_modulo(sys: RewriteSystem, source: Term, target: Term, max_depth: int = 8, max_states: int = 20_000):
    """True when ``source`` reaches the class of ``target`` in at least one
    step (modulo the system's axioms); None when the search was cut short."""
    q = quotient_for(sys.axioms)
    goal = q.rep(target)
    start = q.rep(source)
    seen = {start: 0}
    queue = deque([start])
    truncated = False
    while queue:
        s = queue.popleft()
        d = seen[s]
        if d >= max_depth:
            truncated = True
            continue
        for _, r in modulo_steps(sys, s, q):
            if r == goal:
                return True
            if r not in seen:
                if len(seen) >= max_states:
                    truncated = True
                    continue
                seen[r] = d + 1
                queue.append(r)
    return None if truncated else False


def step_lemma_violations(t0: Term, gamma=frozenset(), sys: RewriteSystem | None = None) -> list:
    """Check the trunk-advances-or-measure-decreases property on every step.

    ``t0`` must be SN and satisfy the surface predicate.  Returns a list of
    ``(step, reason)`` pairs; empty means every step complied.
    """
    sys = sys or void_system()
    h = sys.params.h_cap
    t0 = alpha_canonical(t0)
    gamma = frozenset(gamma)

    def ev(u):
        return void_eta(u, h)

    def sn(u):
        return void_sn(u, h)

    s0 = alpha_canonical(trunk(gamma, t0))
    m0 = surface_measure(gamma, t0, ev)
    bad = []
    for step in one_step_reducts(sys, t0):
        t1 = step.target
        if not surface_sn(gamma, t1, sn):
            bad.append((step, "surface predicate lost"))
            continue
        s1 = alpha_canonical(trunk(gamma, t1))
        if s0 == s1:
            if not m0 > surface_measure(gamma, t1, ev):
                bad.append((step, "trunk unchanged but measure did not decrease"))
            continue
        found = reaches_modulo(sys, s0, s1)
        if not found:
            reason = "trunk does not advance" if found is False else "trunk search cut short"
            bad.append((step, reason))
    return bad
