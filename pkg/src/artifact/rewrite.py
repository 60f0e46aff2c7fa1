"""Generic rewriting modulo an equational theory.

Rules and axioms are *root* functions: given a subterm they return the list
of possible results.  The engine takes care of the contextual closure,
alpha-canonicalisation, equivalence classes and reduction modulo classes.

Root functions receive alpha-canonical subterms, in which no binder shadows
another one along a path; they may return non-canonical terms.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable

from .term import (
    App,
    Lam,
    Term,
    VoidJump,
    alpha_canonical,
    children,
    replace_at,
    subterm_at,
    universe_of,
    with_children,
)

DEFAULT_CLASS_CAP = 100_000


class ClassCapExceeded(RuntimeError):
    """An equivalence class grew beyond the configured cap."""


class RewriteError(ValueError):
    pass


@dataclass(frozen=True)
class RewriteParams:
    h_cap: int = 3  # longest jump list emitted by one h step
    uhat_figure: bool = False  # use the x∉fv(v) variant of the û side condition


@dataclass(frozen=True)
class RuleDef:
    id: str
    universes: frozenset
    fn: Callable  # (subterm, params) -> list of (result, choice)
    replay: Callable | None = None  # (subterm, choice, params) -> result or None
    doc: str = ""


@dataclass(frozen=True)
class AxiomDef:
    id: str
    universes: frozenset
    fn: Callable  # subterm -> list of (result, direction)
    size_preserving: bool = True
    doc: str = ""


RULES: dict = {}
AXIOMS: dict = {}

ALIASES = {
    "β": "beta",
    "û": "uhat",
    "σ1": "sigma1",
    "σ2": "sigma2",
    "box1⁰": "box1_0",
    "box2⁰": "box2_0",
    "σ̂1": "sigmahat1",
    "σ̂2": "sigmahat2",
    "box̂": "boxhat",
    "les:λ": "les:lam",
}


def canonical_id(name: str) -> str:
    return ALIASES.get(name, name)


def register_rule(id, universes, fn, replay=None, doc=""):
    RULES[id] = RuleDef(id, frozenset(universes), fn, replay, doc)
    return RULES[id]


def register_axiom(id, universes, fn, size_preserving=True, doc=""):
    AXIOMS[id] = AxiomDef(id, frozenset(universes), fn, size_preserving, doc)
    return AXIOMS[id]


@dataclass(frozen=True)
class RewriteSystem:
    name: str
    rules: tuple
    axioms: tuple = ()
    universe: str = "j"  # 'lambda', 'j' or 'void'
    params: RewriteParams = field(default_factory=RewriteParams)

    def __post_init__(self):
        for r in self.rules:
            if r not in RULES:
                raise RewriteError(f"unknown rule {r!r}")
        for a in self.axioms:
            if a not in AXIOMS:
                raise RewriteError(f"unknown axiom {a!r}")

    def accepts(self, t: Term) -> bool:
        u = universe_of(t)
        return u == "lambda" or u == self.universe

    def with_params(self, **kw) -> "RewriteSystem":
        return replace(self, params=replace(self.params, **kw))


def _check_universe(sys: RewriteSystem, t: Term):
    if not sys.accepts(t):
        raise RewriteError(f"{sys.name} does not apply to {universe_of(t)}-terms: {t}")


# ---------------------------------------------------------------- steps

@dataclass(frozen=True)
class Step:
    source: Term
    target: Term
    kind: str  # 'rule' or 'axiom'
    name: str
    position: tuple
    choice: object = None  # rule choice data, or '->' / '<-' for axioms

    def reversed(self) -> "Step":
        if self.kind != "axiom":
            raise RewriteError("only axiom steps can be reversed")
        back = {"->": "<-", "<-": "->"}.get(self.choice, self.choice)
        return Step(self.target, self.source, "axiom", self.name, self.position, back)

    def shifted(self, prefix: tuple, outer: Term, outer_target: Term) -> "Step":
        """The same step performed inside a context at ``prefix``."""
        return Step(outer, outer_target, self.kind, self.name, prefix + self.position, self.choice)

    def describe(self) -> str:
        pos = "·".join(map(str, self.position)) or "ε"
        return f"{self.name}@{pos}"


@dataclass
class Trace:
    initial: Term
    steps: list = field(default_factory=list)

    @property
    def final(self) -> Term:
        return self.steps[-1].target if self.steps else self.initial

    def rule_steps(self) -> list:
        return [s for s in self.steps if s.kind == "rule"]

    def rule_names(self) -> list:
        return [s.name for s in self.steps if s.kind == "rule"]

    def __len__(self):
        return len(self.steps)

    def extend(self, other: "Trace") -> "Trace":
        return Trace(self.initial, self.steps + other.steps)

    def to_json(self) -> dict:
        return {
            "initial": str(self.initial),
            "steps": [
                {"kind": s.kind, "name": s.name, "position": list(s.position), "target": str(s.target)}
                for s in self.steps
            ],
        }


# ---------------------------------------------------------------- contextual closure

def _located_subterms(t: Term):
    out = []
    stack = [((), t)]
    while stack:
        p, s = stack.pop()
        out.append((p, s))
        kids = children(s)
        for i in range(len(kids), 0, -1):
            stack.append((p + (i,), kids[i - 1]))
    return out


def root_results(rule: str, sub: Term, params: RewriteParams) -> list:
    return RULES[rule].fn(sub, params)


def apply_rule_at(sys: RewriteSystem, t: Term, p, r: str) -> set:
    """All results of the root rule ``r`` applied at position ``p``."""
    r = canonical_id(r)
    if r not in sys.rules:
        raise RewriteError(f"rule {r!r} is not part of {sys.name}")
    t = alpha_canonical(t)
    _check_universe(sys, t)
    sub = subterm_at(t, tuple(p))
    return {alpha_canonical(replace_at(t, tuple(p), res)) for res, _ in RULES[r].fn(sub, sys.params)}


def one_step_reducts(sys: RewriteSystem, t: Term) -> list:
    """Every one-step reduct of ``t``, as Steps, deduplicated."""
    t = alpha_canonical(t)
    _check_universe(sys, t)
    return _reducts(sys, t)


def _reducts(sys: RewriteSystem, t: Term) -> list:
    out = []
    seen = set()
    params = sys.params
    fns = [(r, RULES[r].fn) for r in sys.rules]
    for p, sub in _located_subterms(t):
        for r, fn in fns:
            for res, choice in fn(sub, params):
                new = alpha_canonical(replace_at(t, p, res))
                k = (r, p, new)
                if k not in seen:
                    seen.add(k)
                    out.append(Step(t, new, "rule", r, p, choice))
    return out


def is_normal(sys: RewriteSystem, t: Term) -> bool:
    t = alpha_canonical(t)
    params = sys.params
    for p, sub in _located_subterms(t):
        for r in sys.rules:
            if RULES[r].fn(sub, params):
                return False
    return True


def axiom_moves(axioms: Iterable[str], t: Term) -> list:
    """Every single axiom application (either direction, any position)."""
    t = alpha_canonical(t)
    out = []
    seen = set()
    fns = [(a, AXIOMS[a].fn) for a in axioms]
    for p, sub in _located_subterms(t):
        for a, fn in fns:
            for res, direction in fn(sub):
                new = alpha_canonical(replace_at(t, p, res))
                if new == t:
                    continue
                k = (a, p, new)
                if k not in seen:
                    seen.add(k)
                    out.append(Step(t, new, "axiom", a, p, direction))
    return out


# ---------------------------------------------------------------- classes

def _check_axioms(axioms):
    for a in axioms:
        a = canonical_id(a)
        if a not in AXIOMS:
            raise RewriteError(f"unknown axiom {a!r}")
        if not AXIOMS[a].size_preserving:
            raise RewriteError(f"axiom {a} does not preserve size; classes may be infinite")


# ---------------------------------------------------------------- void jump stacks
#
# Void jumps commute freely (CS has no side condition on them), so a class
# of void terms is stored up to the order inside each stack of jumps: only
# members whose stacks are sorted are enumerated.  CS is a strong
# bisimulation for the void rules, so reducts of the sorted members cover
# the whole class up to CS.


def _swap(t: Term, q: tuple):
    """Exchange the void jumps at ``q`` and ``q·1`` (one CS step)."""
    sub = subterm_at(t, q)
    res = VoidJump(VoidJump(sub.body.body, sub.content), sub.body.content)
    new = alpha_canonical(replace_at(t, q, res))
    return new, Step(t, new, "axiom", "CS", q, "<->")


def _inversion(t: Term):
    best = None
    for p, sub in _located_subterms(t):
        if (
            sub.__class__ is VoidJump
            and sub.body.__class__ is VoidJump
            and sub.body.content.sort_key() > sub.content.sort_key()
            and (best is None or len(p) > len(best))
        ):
            best = p
    return best


def sort_void_stacks(t: Term):
    """``(sorted, steps)``: every stack of void jumps sorted by CS steps,
    innermost content smallest."""
    t = alpha_canonical(t)
    steps = []
    while (q := _inversion(t)) is not None:
        t, st = _swap(t, q)
        steps.append(st)
    return t, steps


def _stacks(t: Term) -> list:
    """``(position, depth)`` for every maximal stack of void jumps."""
    out = []
    for p, sub in _located_subterms(t):
        if sub.__class__ is not VoidJump:
            continue
        if p and p[-1] == 1 and subterm_at(t, p[:-1]).__class__ is VoidJump:
            continue
        n = 0
        while sub.__class__ is VoidJump:
            n += 1
            sub = sub.body
        out.append((p, n))
    return out


def _sorted(t: Term) -> Term:
    """Structural twin of :func:`sort_void_stacks` (no steps recorded)."""
    c = t.__class__
    if c is VoidJump:
        contents = []
        while t.__class__ is VoidJump:
            contents.append(_sorted(t.content))
            t = t.body
        body = _sorted(t)
        for x in sorted(contents, key=Term.sort_key):
            body = VoidJump(body, x)
        return body
    kids = children(t)
    if not kids:
        return t
    new = tuple(_sorted(k) for k in kids)
    return t if all(a is b for a, b in zip(new, kids)) else with_children(t, new)


def _restack(t: Term, p: tuple, n: int, order: list) -> Term:
    """The stack of ``n`` jumps at ``p`` with its contents in ``order``
    (indices counted from the outermost jump)."""
    sub = subterm_at(t, p)
    contents = []
    for _ in range(n):
        contents.append(sub.content)
        sub = sub.body
    for i in reversed(order):
        sub = VoidJump(sub, contents[i])
    return replace_at(t, p, sub)


def _variant_steps(t: Term, p: tuple, n: int, kind: str, k: int):
    """CS steps realising a variant of :func:`_variant_orders`."""
    steps = []
    idx = range(k - 1, -1, -1) if kind == "top" else range(k, n - 1)
    for i in idx:
        t, st = _swap(t, p + (1,) * i)
        steps.append(st)
    return t, steps


class Quotient:
    """Equivalence classes for a fixed axiom set, with memoised lookups.

    Every computed class is stored as a BFS tree so that a replayable axiom
    path between any two members can be produced.  With ``sort_void`` (the
    default) classes of void terms under a set containing CS keep only
    members with sorted jump stacks; see :func:`sort_void_stacks`.
    """

    def __init__(self, axioms: Iterable[str], cap: int = DEFAULT_CLASS_CAP, sort_void: bool = True):
        self.axioms = tuple(canonical_id(a) for a in axioms)
        _check_axioms(self.axioms)
        self.cap = cap
        self.sort_void = sort_void and "CS" in self.axioms
        self._others = tuple(a for a in self.axioms if a != "CS")
        self._rep: dict = {}  # term -> representative
        self._members: dict = {}  # representative -> frozenset
        self._parent: dict = {}  # member -> (BFS parent, how it was reached), None at root
        self._entry: dict = {}  # terms that only sort to a member

    def _moves(self, s: Term, void: bool):
        """``(target, how)`` for the neighbours of a member; ``how`` is
        enough to rebuild the axiom steps later (see :meth:`_steps`)."""
        if not void:
            for step in axiom_moves(self.axioms, s):
                yield step.target, step
            return
        # σ1/σ2 only move the top jump of a stack (out of a λ-body or an
        # application head) or its bottom jump (into a λ or application
        # body), so each jump is tried at both ends of its stack
        fns = [(a, AXIOMS[a].fn) for a in self._others]
        for p, n in _stacks(s):
            top = []
            if p and p[-1] == 1 and subterm_at(s, p[:-1]).__class__ in (Lam, App):
                top.append(("top", p[:-1]))
            sub = subterm_at(s, p)
            contents = []
            for _ in range(n):
                contents.append(sub.content)
                sub = sub.body
            if sub.__class__ in (Lam, App):
                top.append(("bottom", p + (1,) * (n - 1)))
            for kind, q in top:
                seen = set()
                for k in range(n):
                    if contents[k] in seen:
                        continue
                    seen.add(contents[k])
                    if (kind, k) in (("top", 0), ("bottom", n - 1)):
                        v, variant = s, None
                    else:
                        order = [k] + [i for i in range(n) if i != k] if kind == "top" else [
                            i for i in range(n) if i != k
                        ] + [k]
                        v, variant = _restack(s, p, n, order), (p, n, kind, k)
                    sub_q = subterm_at(v, q)
                    for a, fn in fns:
                        for res, direction in fn(sub_q):
                            raw = replace_at(v, q, res)
                            target = alpha_canonical(_sorted(alpha_canonical(raw)))
                            if target != s:
                                yield target, (variant, a, q, direction, raw)

    def _steps(self, source: Term, how) -> list:
        if isinstance(how, Step):
            return [how]
        variant, a, q, direction, raw = how
        steps = []
        v = source
        if variant is not None:
            v, steps = _variant_steps(source, *variant)
        mid = alpha_canonical(raw)
        steps.append(Step(v, mid, "axiom", a, q, direction))
        return steps + sort_void_stacks(mid)[1]

    def _close(self, t: Term):
        t = alpha_canonical(t)
        if t in self._rep:
            return
        if not self.axioms:
            self._rep[t] = t
            self._members[t] = frozenset((t,))
            self._parent[t] = None
            return
        void = self.sort_void and universe_of(t) == "void"
        if void:
            s0 = alpha_canonical(_sorted(t))
            if s0 != t:
                self._close(s0)
                self._rep[t] = self._rep[s0]
                self._entry[t] = None
                return
        parent = {t: None}
        queue = deque([t])
        while queue:
            s = queue.popleft()
            for target, how in self._moves(s, void):
                if target not in parent:
                    parent[target] = (s, how)
                    if len(parent) > self.cap:
                        raise ClassCapExceeded(f"class of {t} exceeds {self.cap} members")
                    queue.append(target)
        members = frozenset(parent)
        rep = min(members, key=Term.sort_key)
        self._members[rep] = members
        for m in members:
            self._rep[m] = rep
        self._parent.update(parent)

    def rep(self, t: Term) -> Term:
        t = alpha_canonical(t)
        r = self._rep.get(t)
        if r is None:
            self._close(t)
            r = self._rep[t]
        return r

    def members(self, t: Term) -> frozenset:
        return self._members[self.rep(t)]

    def equivalent(self, t: Term, u: Term) -> bool:
        return self.rep(t) == self.rep(alpha_canonical(u))

    def _to_root(self, t: Term) -> list:
        out = []
        cur = t
        if t in self._entry:
            cur, out = sort_void_stacks(t)
        while (link := self._parent[cur]) is not None:
            src, how = link
            out.extend(s.reversed() for s in reversed(self._steps(src, how)))
            cur = src
        return out

    def path(self, a: Term, b: Term) -> list:
        """Axiom steps leading from ``a`` to ``b`` (same class required)."""
        a = alpha_canonical(a)
        b = alpha_canonical(b)
        if self.rep(a) != self.rep(b):
            raise RewriteError(f"{a} and {b} are not equivalent")
        if a == b:
            return []
        up = self._to_root(a)
        down = [s.reversed() for s in reversed(self._to_root(b))]
        # drop the common suffix/prefix through the BFS root
        while up and down and up[-1] == down[0].reversed():
            up.pop()
            down.pop(0)
        return up + down

    def __len__(self):
        return len(self._rep)


def equiv_class(axioms: Iterable[str], t: Term, cap: int = DEFAULT_CLASS_CAP) -> frozenset:
    """Every member of the class of ``t`` (no stack sorting)."""
    return Quotient(axioms, cap, sort_void=False).members(t)


def equivalent(axioms: Iterable[str], t: Term, u: Term, cap: int = DEFAULT_CLASS_CAP) -> bool:
    return Quotient(axioms, cap).equivalent(t, u)


def class_canonical(axioms: Iterable[str], t: Term) -> Term:
    return Quotient(axioms).rep(t)


_quotients: dict = {}


def quotient_for(axioms: Iterable[str]) -> Quotient:
    """A shared Quotient per axiom set (memo tables persist across calls)."""
    key = tuple(sorted(canonical_id(a) for a in axioms))
    q = _quotients.get(key)
    if q is None or len(q) > 2_000_000:
        q = _quotients[key] = Quotient(key)
    return q


def one_step_modulo(sys: RewriteSystem, t: Term, q: Quotient | None = None) -> set:
    """Class representatives reachable in one step from the class of ``t``."""
    return {rep for _, rep in modulo_steps(sys, t, q)}


def modulo_steps(sys: RewriteSystem, t: Term, q: Quotient | None = None) -> list:
    """Pairs ``(step, rep)``, one per successor class.

    ``step`` is a rule step from some member of the class of ``t`` and
    ``rep`` is the representative of the class of its target.
    """
    t = alpha_canonical(t)
    _check_universe(sys, t)
    if q is None:
        q = quotient_for(sys.axioms)
    out = {}
    for m in sorted(q.members(t), key=Term.sort_key):
        for step in _reducts(sys, m):
            r = q.rep(step.target)
            if r not in out:
                out[r] = step
    return [(step, r) for r, step in out.items()]


def modulo_trace(q: Quotient, start: Term, steps: list, end: Term | None = None) -> Trace:
    """Expand rule steps taken on class members into a replayable trace.

    Axiom paths are inserted wherever the next step starts from a different
    member of the current class, and before ``end`` when it is given.
    """
    start = alpha_canonical(start)
    tr = Trace(start)
    cur = start
    for st in steps:
        tr.steps.extend(q.path(cur, st.source))
        tr.steps.append(st)
        cur = st.target
    if end is not None:
        tr.steps.extend(q.path(cur, end))
    return tr


def search_modulo(sys: RewriteSystem, start: Term, goal, max_depth: int, max_states: int = 50_000):
    """Breadth-first search over classes for a class satisfying ``goal``.

    ``goal`` is a predicate on class representatives.  Returns
    ``(trace, depth, states)`` where ``trace`` leads from ``start`` to a
    member of the goal class (None if not found within the limits).  The
    start class itself counts at depth 0.
    """
    q = quotient_for(sys.axioms)
    start = alpha_canonical(start)
    root = q.rep(start)
    parent = {root: None}
    frontier = [root]
    depth = 0
    while True:
        for r in frontier:
            if goal(r):
                chain = []
                while parent[r] is not None:
                    st, r = parent[r]
                    chain.append(st)
                chain.reverse()
                return modulo_trace(q, start, chain), depth, len(parent)
        if depth >= max_depth or not frontier:
            return None, depth, len(parent)
        nxt = []
        for r in frontier:
            for st, r2 in modulo_steps(sys, r, q):
                if r2 not in parent:
                    if len(parent) >= max_states:
                        return None, depth, len(parent)
                    parent[r2] = (st, r)
                    nxt.append(r2)
        frontier = nxt
        depth += 1


# ---------------------------------------------------------------- validation

def replay_rule(sys_params: RewriteParams, t: Term, step: Step) -> bool:
    sub = subterm_at(t, step.position)
    rd = RULES[step.name]
    target = alpha_canonical(step.target)
    if rd.replay is not None:
        res = rd.replay(sub, step.choice, sys_params)
        return res is not None and alpha_canonical(replace_at(t, step.position, res)) == target
    return any(
        alpha_canonical(replace_at(t, step.position, res)) == target for res, _ in rd.fn(sub, sys_params)
    )


def replay_axiom(t: Term, step: Step) -> bool:
    sub = subterm_at(t, step.position)
    target = alpha_canonical(step.target)
    return any(
        alpha_canonical(replace_at(t, step.position, res)) == target for res, _ in AXIOMS[step.name].fn(sub)
    )


def validate_trace(trace: Trace, sys: RewriteSystem | None = None) -> bool:
    """Re-derive every step.  Raises RewriteError on the first bad step.

    When ``sys`` is given, every rule and axiom must belong to it.
    """
    params = sys.params if sys is not None else RewriteParams(h_cap=10**6)
    cur = alpha_canonical(trace.initial)
    for i, step in enumerate(trace.steps):
        src = alpha_canonical(step.source)
        if src != cur:
            raise RewriteError(f"step {i} does not chain: {src} vs {cur}")
        if step.kind == "rule":
            if sys is not None and step.name not in sys.rules:
                raise RewriteError(f"step {i}: rule {step.name} not in {sys.name}")
            ok = replay_rule(params, cur, step)
        elif step.kind == "axiom":
            if sys is not None and step.name not in sys.axioms:
                raise RewriteError(f"step {i}: axiom {step.name} not in {sys.name}")
            ok = replay_axiom(cur, step)
        else:
            raise RewriteError(f"step {i}: unknown kind {step.kind}")
        if not ok:
            raise RewriteError(f"step {i} ({step.describe()}) does not replay from {cur}")
        cur = alpha_canonical(step.target)
    return True
