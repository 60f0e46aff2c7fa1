"""The calculus with jumps: rules, subsystems and their meta-properties.

Rules (``L`` is a possibly empty list of jumps):

* ``dB``: ``(λx.t)L u -> t[x/u]L`` when no binder of ``L`` is free in ``u``
* ``w``: ``t[x/u] -> t`` when ``x`` does not occur in ``t``
* ``d``: ``t[x/u] -> t{x/u}`` when ``x`` occurs once
* ``c``: ``t[x/u] -> t'[x/u][y/u]`` when ``x`` occurs at least twice, where
  ``t'`` renames some, but not all, occurrences of ``x`` to a fresh ``y``
* ``u``: ``B[t[x/u]] -> B[t][x/u]`` for a void jump inside a boxed context
  ``B`` that binds no free variable of ``u``
"""

from __future__ import annotations

from collections import deque

from .rewrite import (
    RULES,
    RewriteError,
    RewriteSystem,
    Step,
    Trace,
    register_rule,
    one_step_reducts,
)
from .term import (
    App,
    Jump,
    Lam,
    Term,
    Var,
    VoidJump,
    all_names,
    alpha_canonical,
    children,
    fresh_name,
    is_jump,
    is_lambda_term,
    multiplicity,
    positions_of,
    rename_at_raw,
    replace_at,
    split_choices,
    subst,
    subterm_at,
)


# ---------------------------------------------------------------- helpers

def peel_jumps(f: Term, jump_cls):
    """Split ``f`` as ``(λx.t)L``; returns ``(lam, L)`` or None.

    ``L`` lists ``(binder, content)`` pairs from the outermost jump inwards.
    """
    L = []
    while f.__class__ is jump_cls:
        L.append((f.binder, f.content))
        f = f.body
    if f.__class__ is Lam:
        return f, L
    return None


def rewrap(t: Term, L, jump_cls) -> Term:
    for b, c in reversed(L):
        t = VoidJump(t, c) if jump_cls is VoidJump else Jump(t, b, c)
    return t


def boxed_descendants(t: Term, jump_cls):
    """Jumps of class ``jump_cls`` below ``t`` reached through a box.

    Yields ``(position, jump, names bound on the path)``.
    """
    stack = [((), t, frozenset(), False)]
    while stack:
        p, s, bound, boxed = stack.pop()
        if boxed and s.__class__ is jump_cls:
            yield p, s, bound
        c = s.__class__
        if c is Lam:
            stack.append((p + (1,), s.body, bound | {s.binder}, boxed))
        elif c is App:
            stack.append((p + (2,), s.arg, bound, True))
            stack.append((p + (1,), s.fun, bound, boxed))
        elif c is Jump:
            stack.append((p + (2,), s.content, bound, True))
            stack.append((p + (1,), s.body, bound | {s.binder}, boxed))
        elif c is VoidJump:
            stack.append((p + (2,), s.content, bound, True))
            stack.append((p + (1,), s.body, bound, boxed))


# ---------------------------------------------------------------- root rules

def _dB(t, params):
    if t.__class__ is not App:
        return []
    m = peel_jumps(t.fun, Jump)
    if m is None:
        return []
    lam, L = m
    u = t.arg
    fvu = u.free_vars()
    if any(b in fvu for b, _ in L):
        return []
    return [(rewrap(Jump(lam.body, lam.binder, u), L, Jump), None)]


def _w(t, params):
    if t.__class__ is Jump and t.binder not in t.body.free_vars():
        return [(t.body, None)]
    return []


def _d(t, params):
    if t.__class__ is Jump and multiplicity(t.body, t.binder) == 1:
        return [(subst(t.body, t.binder, t.content), None)]
    return []


def _c_result(t, S):
    x, body, u = t.binder, t.body, t.content
    occ = positions_of(body, x)
    y = fresh_name(all_names(body) | all_names(u) | {x}, x)
    renamed = rename_at_raw(body, [occ[i] for i in S], x, y)
    return Jump(Jump(renamed, x, u), y, u)


def _c(t, params):
    if t.__class__ is not Jump:
        return []
    n = multiplicity(t.body, t.binder)
    if n < 2:
        return []
    return [(_c_result(t, S), S) for S in split_choices(n)]


def _c_replay(t, choice, params):
    if t.__class__ is not Jump:
        return None
    n = multiplicity(t.body, t.binder)
    S = tuple(choice)
    if n < 2 or not S or len(S) >= n or any(not 0 <= i < n for i in S):
        return None
    return _c_result(t, S)


def unbox(t: Term, q: tuple, jump_cls) -> Term:
    """Move the jump at ``q`` (inside a box of ``t``) to the root of ``t``."""
    j = subterm_at(t, q)
    rest = replace_at(t, q, j.body)
    if jump_cls is VoidJump:
        return VoidJump(rest, j.content)
    x = j.binder
    if x in rest.free_vars() or x in all_names(rest):
        x = fresh_name(all_names(t), x)
    return Jump(rest, x, j.content)


def unboxing_rule(jump_cls):
    def fn(t, params):
        out = []
        for q, j, bound in boxed_descendants(t, jump_cls):
            if jump_cls is Jump and j.binder in j.body.free_vars():
                continue
            if bound & j.content.free_vars():
                continue
            out.append((unbox(t, q, jump_cls), q))
        return out

    def replay(t, choice, params):
        for res, q in fn(t, params):
            if q == tuple(choice):
                return res
        return None

    return fn, replay


register_rule("dB", ("j",), _dB, doc="(λx.t)L u -> t[x/u]L")
register_rule("w", ("j",), _w, doc="t[x/u] -> t if |t|_x = 0")
register_rule("d", ("j",), _d, doc="t[x/u] -> t{x/u} if |t|_x = 1")
register_rule("c", ("j",), _c, replay=_c_replay, doc="t[x/u] -> t_[y]_x[x/u][y/u] if |t|_x > 1")
_u_fn, _u_replay = unboxing_rule(Jump)
register_rule("u", ("j",), _u_fn, replay=_u_replay, doc="B[t[x/u]] -> B[t][x/u], x∉fv(t)")


# ---------------------------------------------------------------- systems

def lambdaj_system() -> RewriteSystem:
    return RewriteSystem("lambdaj", ("dB", "w", "d", "c"))


def j_system() -> RewriteSystem:
    return RewriteSystem("j", ("w", "d", "c"))


def notgc_system() -> RewriteSystem:
    return RewriteSystem("notgc", ("dB", "d", "c"))


# ---------------------------------------------------------------- normal forms

def j_normal_form(t: Term) -> Term:
    """The j-normal form, computed structurally."""
    return alpha_canonical(_jnf(t))


def _jnf(t):
    c = t.__class__
    if c is Var:
        return t
    if c is Lam:
        return Lam(t.binder, _jnf(t.body))
    if c is App:
        return App(_jnf(t.fun), _jnf(t.arg))
    if c is Jump:
        return subst(_jnf(t.body), t.binder, _jnf(t.content))
    raise ValueError("j-normal forms are defined on terms with named jumps")


# ---------------------------------------------------------------- deterministic steps

def apply_choice(t: Term, p: tuple, rule: str, choice=None) -> Step:
    """Perform one specific rule instance; raise if it does not apply."""
    return apply_choice_in(lambdaj_system(), alpha_canonical(t), tuple(p), rule, choice)


def leftmost_split(n: int) -> tuple:
    """Split choice keeping only the leftmost occurrence on the original name."""
    return tuple(range(1, n))


def full_composition_witness(t: Term, x: str, u: Term) -> Trace:
    """A j-trace from ``t[x/u]`` to ``t{x/u}``.

    Follows the induction on the number of occurrences: w when there are
    none, d when there is one, otherwise c (the original name keeps the
    leftmost occurrence) followed by the two smaller compositions.
    """
    start = alpha_canonical(Jump(t, x, u))
    tr = Trace(start)
    _fc(tr, start, ())
    return tr


def _fc(tr: Trace, s: Term, p: tuple) -> Term:
    j = subterm_at(s, p)
    n = multiplicity(j.body, j.binder)
    if n == 0:
        step = apply_choice(s, p, "w")
        tr.steps.append(step)
        return step.target
    if n == 1:
        step = apply_choice(s, p, "d")
        tr.steps.append(step)
        return step.target
    step = apply_choice(s, p, "c", leftmost_split(n))
    tr.steps.append(step)
    s = _fc(tr, step.target, p + (1,))
    return _fc(tr, s, p)


def simulate_beta(t: Term, p: tuple) -> Trace:
    """dB followed by full composition, simulating one beta step at ``p``."""
    t = alpha_canonical(t)
    if not is_lambda_term(t):
        raise ValueError("simulate_beta expects a pure lambda-term")
    p = tuple(p)
    r = subterm_at(t, p)
    if not (r.__class__ is App and r.fun.__class__ is Lam):
        raise ValueError(f"no beta-redex at {p}")
    step = apply_choice(t, p, "dB")
    tr = Trace(t, [step])
    _fc(tr, step.target, p)
    return tr


def beta_reduct(t: Term, p: tuple) -> Term:
    r = subterm_at(t, p)
    return alpha_canonical(replace_at(t, p, subst(r.fun.body, r.fun.binder, r.arg)))


def first_redex(sys: RewriteSystem, t: Term):
    """Leftmost-outermost redex: ``(position, rule)`` or None."""
    t = alpha_canonical(t)
    stack = [((), t)]
    while stack:
        p, s = stack.pop()
        for r in sys.rules:
            if RULES[r].fn(s, sys.params):
                return p, r
        kids = children(s)
        for i in range(len(kids), 0, -1):
            stack.append((p + (i,), kids[i - 1]))
    return None


def deterministic_step(sys: RewriteSystem, t: Term) -> Step | None:
    found = first_redex(sys, t)
    if found is None:
        return None
    p, r = found
    t = alpha_canonical(t)
    choice = None
    if r == "c":
        j = subterm_at(t, p)
        choice = leftmost_split(multiplicity(j.body, j.binder))
    elif RULES[r].replay is not None:
        choice = RULES[r].fn(subterm_at(t, p), sys.params)[0][1]
    return apply_choice_in(sys, t, p, r, choice)


def apply_choice_in(sys: RewriteSystem, t: Term, p: tuple, rule: str, choice) -> Step:
    sub = subterm_at(t, p)
    rd = RULES[rule]
    if rd.replay is not None:
        res = rd.replay(sub, choice, sys.params)
    else:
        results = rd.fn(sub, sys.params)
        res = results[0][0] if results else None
    if res is None:
        raise RewriteError(f"{rule} does not apply at {p} in {t}")
    return Step(t, alpha_canonical(replace_at(t, p, res)), "rule", rule, p, choice)


def normalize(sys: RewriteSystem, t: Term, max_steps: int = 10_000) -> Trace:
    """Leftmost-outermost reduction to normal form (raises past ``max_steps``)."""
    tr = Trace(alpha_canonical(t))
    cur = tr.initial
    for _ in range(max_steps):
        step = deterministic_step(sys, cur)
        if step is None:
            return tr
        tr.steps.append(step)
        cur = step.target
    raise RewriteError(f"no normal form within {max_steps} steps")


# ---------------------------------------------------------------- parallel reduction

def parallel_reducts(t: Term) -> frozenset:
    """All simultaneous reducts of a j-normal form (parallel beta)."""
    t = alpha_canonical(t)
    if any(is_jump(s) for s in _subterms(t)):
        raise ValueError("parallel reduction is defined on j-normal forms")
    memo: dict = {}
    return frozenset(alpha_canonical(r) for r in _par(t, memo))


def _subterms(t):
    yield t
    for k in children(t):
        yield from _subterms(k)


def _par(t, memo):
    got = memo.get(t)
    if got is not None:
        return got
    c = t.__class__
    if c is Var:
        out = {t}
    elif c is Lam:
        out = {Lam(t.binder, b) for b in _par(t.body, memo)}
    else:
        fs = _par(t.fun, memo)
        as_ = _par(t.arg, memo)
        out = {App(f, a) for f in fs for a in as_}
        if t.fun.__class__ is Lam:
            x = t.fun.binder
            for b in _par(t.fun.body, memo):
                for a in as_:
                    out.add(subst(b, x, a))
    out = {alpha_canonical(s) for s in out}
    memo[t] = out
    return out


# ---------------------------------------------------------------- w-postponement

def _w_reaches(start: Term, goal: Term, limit: int = 64):
    """Shortest non-empty w-trace from ``start`` to ``goal`` or None."""
    w_sys = RewriteSystem("w", ("w",))
    goal = alpha_canonical(goal)
    parent = {start: None}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for step in one_step_reducts(w_sys, s):
            if step.target == goal:
                path = [step]
                cur = s
                while parent[cur] is not None:
                    path.append(parent[cur])
                    cur = parent[cur].source
                return list(reversed(path))
            if step.target not in parent and len(parent) < limit:
                parent[step.target] = step
                queue.append(step.target)
    return None


def _notgc_paths(start: Term, max_len: int):
    """Non-empty notgc step sequences from ``start``, shortest first."""
    notgc = notgc_system()
    layer = [(start, [])]
    for _ in range(max_len):
        nxt = []
        for s, path in layer:
            for st in one_step_reducts(notgc, s):
                p = path + [st]
                yield p
                nxt.append((st.target, p))
        layer = nxt


def swap_w(w_step: Step, g_step: Step, max_notgc: int = 3) -> list:
    """Turn ``w`` then a notgc step into notgc steps then ``w+``.

    A single notgc step is tried first. More are used only when the w step
    lowered a multiplicity, e.g. turning a c redex into a d redex.
    """
    goal = alpha_canonical(g_step.target)
    for path in _notgc_paths(w_step.source, max_notgc):
        if path[-1].target == goal:
            return path
        tail = _w_reaches(path[-1].target, goal)
        if tail:
            return path + tail
    raise RewriteError(f"cannot postpone w in {w_step.source} -> {g_step.target}")


def postpone_w(tr: Trace) -> Trace:
    """Reorder a lambdaj trace so that every w step comes last.

    Local swaps come first. If they had to add notgc steps, an exhaustive
    search looks for a reordering with the original notgc count.
    """
    steps = list(tr.steps)
    while True:
        for i in range(len(steps) - 1):
            if steps[i].name == "w" and steps[i + 1].name != "w":
                steps[i : i + 2] = swap_w(steps[i], steps[i + 1])
                break
        else:
            break
    out = Trace(tr.initial, steps)
    k = notgc_count(tr)
    if notgc_count(out) != k:
        found = postponed_trace(tr.initial, tr.final, k)
        if found is not None:
            return found
    return out


def postponed_trace(t: Term, goal: Term, k: int, limit: int = 20_000):
    """Some trace ``t ->notgc^k ->w* goal``, or None if there is none."""
    notgc = notgc_system()
    w_sys = RewriteSystem("w", ("w",))
    goal = alpha_canonical(goal)
    start = alpha_canonical(t)
    layer = {start: []}
    for _ in range(k):
        nxt = {}
        for s, path in layer.items():
            for st in one_step_reducts(notgc, s):
                nxt.setdefault(st.target, path + [st])
        if len(nxt) > limit:
            raise RewriteError("search cap exceeded")
        layer = nxt
    for s, path in layer.items():
        if s == goal:
            return Trace(start, path)
        tail = _w_reaches(s, goal, limit=limit)
        if tail:
            return Trace(start, path + tail)
    return None


def notgc_count(tr: Trace) -> int:
    return sum(1 for s in tr.steps if s.kind == "rule" and s.name != "w")


# ---------------------------------------------------------------- unboxing

def unboxing_reducts(t: Term) -> set:
    sys = RewriteSystem("u", ("u",))
    return {s.target for s in one_step_reducts(sys, t)}
