"""Verification harness: reduction graphs, SN and confluence checks,
strong bisimulation, divergence detection and term enumeration."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from functools import lru_cache

import networkx as nx

from .rewrite import (
    ClassCapExceeded,
    Quotient,
    RewriteSystem,
    Step,
    Trace,
    modulo_steps,
    modulo_trace,
    one_step_reducts,
    quotient_for,
)
from .term import App, Jump, Lam, Term, Var, VoidJump, alpha_canonical, children

DEFAULT_MAX_STATES = 50_000
DEFAULT_MAX_DEPTH = 30

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


def _system(c) -> RewriteSystem:
    if isinstance(c, RewriteSystem):
        return c
    from .zoo import build

    return build(c)


@dataclass
class Verdict:
    id: str
    status: str
    counterexample: object = None
    millis: float = 0.0
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_json(self) -> dict:
        out = {"id": self.id, "status": self.status, "millis": round(self.millis, 1)}
        if self.counterexample is not None:
            ce = self.counterexample
            out["counterexample"] = ce.to_json() if hasattr(ce, "to_json") else str(ce)
        if self.detail:
            out["detail"] = self.detail
        return out


# ---------------------------------------------------------------- reduction graphs

@dataclass
class ReductionGraph:
    system: RewriteSystem
    root: Term
    states: list
    edges: dict  # rep -> list of (Step, rep)
    depth: dict  # rep -> BFS depth
    status: str  # 'complete', 'state-cap' or 'depth-cap'
    caps: dict

    @property
    def complete(self) -> bool:
        return self.status == "complete"

    def digraph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self.states)
        for s, outs in self.edges.items():
            for _, r in outs:
                g.add_edge(s, r)
        return g

    def find_cycle(self):
        """A list of reps forming a cycle, or None."""
        try:
            cyc = nx.find_cycle(self.digraph(), self.root)
        except nx.NetworkXNoCycle:
            return None
        return [a for a, _ in cyc]

    def path_to(self, target: Term) -> list:
        """Rule steps along BFS parents from the root to ``target``."""
        parent = {}
        for s in self.states:
            for st, r in self.edges.get(s, ()):
                if r not in parent and r != self.root and self.depth.get(r) == self.depth[s] + 1:
                    parent[r] = st
        chain = []
        q = quotient_for(self.system.axioms)
        cur = target
        while cur != self.root:
            st = parent[cur]
            chain.append(st)
            cur = q.rep(st.source)
        chain.reverse()
        return chain

    def to_dot(self) -> str:
        ids = {s: i for i, s in enumerate(self.states)}
        lines = ["digraph reductions {", "  node [shape=box, fontname=monospace];"]
        for s, i in ids.items():
            label = str(s).replace("\\", "\\\\").replace('"', '\\"')
            extra = ", style=bold" if s == self.root else ""
            lines.append(f'  n{i} [label="{label}"{extra}];')
        for s, outs in self.edges.items():
            for st, r in outs:
                if r in ids:
                    lines.append(f'  n{ids[s]} -> n{ids[r]} [label="{st.name}"];')
        lines.append("}")
        return "\n".join(lines)


def explore(c, t: Term, max_states: int = DEFAULT_MAX_STATES, max_depth: int = DEFAULT_MAX_DEPTH) -> ReductionGraph:
    """Breadth-first exploration of the class graph reachable from ``t``."""
    sys = _system(c)
    q = quotient_for(sys.axioms)
    root = q.rep(alpha_canonical(t))
    states = [root]
    depth = {root: 0}
    edges: dict = {}
    frontier = [root]
    status = "complete"
    while frontier:
        nxt = []
        for s in frontier:
            if depth[s] >= max_depth:
                status = "depth-cap"
                continue
            outs = modulo_steps(sys, s, q)
            edges[s] = outs
            for _, r in outs:
                if r not in depth:
                    if len(states) >= max_states:
                        status = "state-cap"
                        continue
                    depth[r] = depth[s] + 1
                    states.append(r)
                    nxt.append(r)
        frontier = nxt
    return ReductionGraph(sys, root, states, edges, depth, status, {"max_states": max_states, "max_depth": max_depth})


def _cycle_trace(g: ReductionGraph, cycle: list) -> Trace:
    q = quotient_for(g.system.axioms)
    lead = g.path_to(cycle[0])
    loop = []
    for a, b in zip(cycle, cycle[1:] + cycle[:1]):
        st = next(st for st, r in g.edges[a] if r == b)
        loop.append(st)
    return modulo_trace(q, g.root, lead + loop, end=q.rep(cycle[0]))


def certify_sn(g: ReductionGraph) -> Verdict:
    """Pass iff the graph is complete and acyclic; cycles fail even when capped."""
    started = time.perf_counter()
    cycle = g.find_cycle()
    detail = {"states": len(g.states), "status": g.status}
    if cycle is not None:
        v = Verdict("sn", FAIL, _cycle_trace(g, cycle), detail=detail)
    elif not g.complete:
        v = Verdict("sn", INCONCLUSIVE, detail=detail)
    else:
        v = Verdict("sn", PASS, detail=detail)
    v.millis = (time.perf_counter() - started) * 1000
    return v


def is_sn(c, t: Term, **caps) -> str:
    return certify_sn(explore(c, t, **caps)).status


# ---------------------------------------------------------------- confluence

def _reachable(sys, q, start, depth) -> set:
    seen = {start}
    frontier = [start]
    for _ in range(depth):
        nxt = []
        for s in frontier:
            for _, r in modulo_steps(sys, s, q):
                if r not in seen:
                    seen.add(r)
                    nxt.append(r)
        frontier = nxt
    return seen


def local_confluence(c, t: Term, join_depth: int = 6) -> Verdict:
    """Every one-step peak from ``t`` joins within ``join_depth`` steps."""
    started = time.perf_counter()
    sys = _system(c)
    q = quotient_for(sys.axioms)
    root = q.rep(alpha_canonical(t))
    succ = [r for _, r in modulo_steps(sys, root, q)]
    reach = {r: _reachable(sys, q, r, join_depth) for r in succ}
    for i, a in enumerate(succ):
        for b in succ[i + 1 :]:
            if not (reach[a] & reach[b]):
                v = Verdict("local-confluence", FAIL, f"{a} <- {root} -> {b}")
                v.millis = (time.perf_counter() - started) * 1000
                return v
    v = Verdict("local-confluence", PASS, detail={"peaks": len(succ) * (len(succ) - 1) // 2})
    v.millis = (time.perf_counter() - started) * 1000
    return v


# ---------------------------------------------------------------- strong bisimulation

@dataclass
class BisimFailure:
    """``left ≡ right`` but ``step`` from ``left`` has no match from ``right``."""

    left: Term
    right: Term
    equivalence: list  # axiom steps from left to right
    step: Step
    right_reducts: list

    def to_json(self) -> dict:
        return {
            "left": str(self.left),
            "right": str(self.right),
            "equivalence": [s.describe() for s in self.equivalence],
            "step": self.step.describe(),
            "reduct": str(self.step.target),
            "right_reducts": [str(r) for r in self.right_reducts],
        }

    def __str__(self):
        return f"{self.left} ≡ {self.right}; {self.left} -{self.step.name}-> {self.step.target} is unmatched"


def bisim_failures(axioms, c, t: Term, q: Quotient | None = None, first_only: bool = True) -> list:
    """Unmatched steps within the class of ``t``.

    The equivalence is a strong bisimulation on the class iff every member
    has the same set of one-step reduct classes.
    """
    sys = _system(c)
    q = q or Quotient(axioms)
    members = sorted(q.members(t), key=Term.sort_key)
    profile = {}
    for m in members:
        profile[m] = {}
        for st in one_step_reducts(sys, m):
            profile[m].setdefault(q.rep(st.target), st)
    out = []
    for a in members:
        for b in members:
            if a is b:
                continue
            missing = [r for r in profile[a] if r not in profile[b]]
            for r in missing:
                st = profile[a][r]
                out.append(BisimFailure(a, b, q.path(a, b), st, [s.target for s in profile[b].values()]))
                if first_only:
                    return out
    return out


def strong_bisim_check(axioms, c, terms, id: str = "strong-bisim") -> Verdict:
    """Check the strong bisimulation property on the classes of ``terms``."""
    started = time.perf_counter()
    q = Quotient(axioms)
    done = set()
    n = 0
    for t in terms:
        r = q.rep(t)
        if r in done:
            continue
        done.add(r)
        n += 1
        fails = bisim_failures(axioms, c, r, q)
        if fails:
            v = Verdict(id, FAIL, fails[0], detail={"classes": n})
            v.millis = (time.perf_counter() - started) * 1000
            return v
    v = Verdict(id, PASS, detail={"classes": n})
    v.millis = (time.perf_counter() - started) * 1000
    return v


def replay_bisim_failure(f: BisimFailure, axioms, c) -> bool:
    """Re-derive a bisimulation counterexample from scratch."""
    from .rewrite import validate_trace

    sys = _system(c)
    validate_trace(Trace(f.left, list(f.equivalence)))
    validate_trace(Trace(f.left, [f.step]), sys)
    q = Quotient(axioms)
    target = q.rep(f.step.target)
    return all(q.rep(s.target) != target for s in one_step_reducts(sys, f.right))


# ---------------------------------------------------------------- divergence

def _contains(s: Term, t: Term) -> bool:
    stack = [s]
    size = t.size
    while stack:
        x = stack.pop()
        if x.size == size and alpha_canonical(x) == t:
            return True
        if x.size > size:
            stack.extend(children(x))
    return False


def detect_divergence(
    c, t: Term, depth: int = 12, max_states: int = DEFAULT_MAX_STATES, class_cap: int = 20_000
) -> Verdict:
    """Look for a reduct with a subterm α-equal to ``t`` (or a cycle).

    States are checked as soon as they are discovered, so a divergence
    near the root is reported without building the whole graph.  Finding
    one fails the verdict with a replayable trace; passing needs a
    complete, acyclic graph.  Classes over ``class_cap`` members are
    skipped and make the search inconclusive.
    """
    started = time.perf_counter()
    sys = _system(c)
    q = Quotient(sys.axioms, cap=class_cap)
    t = alpha_canonical(t)

    def done(v):
        v.millis = (time.perf_counter() - started) * 1000
        return v

    try:
        root = q.rep(t)
    except ClassCapExceeded:
        return done(Verdict("divergence", INCONCLUSIVE, detail={"status": "class-cap"}))
    parent = {root: None}
    level = {root: 0}
    edges: dict = {}
    frontier = [root]
    status = "complete"
    while frontier:
        nxt = []
        for s in frontier:
            if level[s] >= depth:
                status = "depth-cap"
                continue
            try:
                outs = modulo_steps(sys, s, q)
            except ClassCapExceeded:
                status = "class-cap"
                continue
            edges[s] = outs
            for st, r in outs:
                if r in level:
                    continue
                if len(level) >= max_states:
                    status = "state-cap"
                    continue
                level[r] = level[s] + 1
                parent[r] = st
                nxt.append(r)
                for m in sorted(q.members(r), key=Term.sort_key):
                    if _contains(m, t):
                        chain = []
                        cur = r
                        while parent[cur] is not None:
                            chain.append(parent[cur])
                            cur = q.rep(parent[cur].source)
                        tr = modulo_trace(q, t, chain[::-1], end=m)
                        return done(
                            Verdict("divergence", FAIL, tr, detail={"embedding": str(m), "depth": level[r]})
                        )
        frontier = nxt
    g = ReductionGraph(sys, root, list(level), edges, level, "complete" if status == "complete" else status,
                       {"max_states": max_states, "max_depth": depth, "class_cap": class_cap})
    if status == "class-cap":
        g.status = "state-cap"
    sn = certify_sn(g)
    detail = dict(sn.detail, status=status)
    return done(Verdict("divergence", sn.status, sn.counterexample, detail=detail))


# ---------------------------------------------------------------- enumeration

def _bname(d: int) -> str:
    return f"_{d}"


def _gen(universe: str, size: int, pool: tuple, depth: int):
    """Terms of exactly ``size`` with binders named by scope depth."""
    if size == 1:
        for x in pool:
            yield Var(x)
        for d in range(depth):
            yield Var(_bname(d))
        return
    yield from (Lam(_bname(depth), b) for b in _gen(universe, size - 1, pool, depth + 1))
    for k in range(1, size - 1):
        lefts = list(_gen(universe, k, pool, depth))
        if not lefts:
            continue
        rights = list(_gen(universe, size - 1 - k, pool, depth))
        for a in lefts:
            for b in rights:
                yield App(a, b)
    if universe == "j":
        for k in range(1, size - 1):
            bodies = list(_gen(universe, k, pool, depth + 1))
            if not bodies:
                continue
            contents = list(_gen(universe, size - 1 - k, pool, depth))
            for a in bodies:
                for b in contents:
                    yield Jump(a, _bname(depth), b)
    elif universe == "void":
        for k in range(1, size - 1):
            bodies = list(_gen(universe, k, pool, depth))
            contents = list(_gen(universe, size - 1 - k, pool, depth))
            for a in bodies:
                for b in contents:
                    yield VoidJump(a, b)


def enumerate_terms(universe: str, max_size: int, free_pool=("x", "y", "z"), min_size: int = 1):
    """All α-classes of terms of the universe up to ``max_size``.

    Free variables come from ``free_pool``.  Terms are α-canonical and
    listed by size, in a fixed order.  The ``j`` universe includes pure
    λ-terms and terms with named jumps; ``void`` uses anonymous jumps.
    """
    if universe not in ("lambda", "j", "void"):
        raise ValueError(f"unknown universe {universe!r}")
    pool = tuple(free_pool)
    for n in range(min_size, max_size + 1):
        for t in _gen(universe, n, pool, 0):
            yield alpha_canonical(t)


@lru_cache(maxsize=None)
def _count(universe: str, size: int, npool: int, depth: int) -> int:
    if size < 1:
        return 0
    if size == 1:
        return npool + depth
    total = _count(universe, size - 1, npool, depth + 1)
    for k in range(1, size - 1):
        total += _count(universe, k, npool, depth) * _count(universe, size - 1 - k, npool, depth)
        if universe == "j":
            total += _count(universe, k, npool, depth + 1) * _count(universe, size - 1 - k, npool, depth)
        elif universe == "void":
            total += _count(universe, k, npool, depth) * _count(universe, size - 1 - k, npool, depth)
    return total


def count_terms(universe: str, size: int, npool: int) -> int:
    """Number of α-classes of exactly ``size`` constructors."""
    return _count(universe, size, npool, 0)


def _sample(universe, size, pool, depth, rng):
    if size == 1:
        i = rng.randrange(len(pool) + depth)
        return Var(pool[i]) if i < len(pool) else Var(_bname(i - len(pool)))
    n = len(pool)
    options = [("lam", None, _count(universe, size - 1, n, depth + 1))]
    for k in range(1, size - 1):
        options.append(("app", k, _count(universe, k, n, depth) * _count(universe, size - 1 - k, n, depth)))
        if universe == "j":
            options.append(("jump", k, _count(universe, k, n, depth + 1) * _count(universe, size - 1 - k, n, depth)))
        elif universe == "void":
            options.append(("void", k, _count(universe, k, n, depth) * _count(universe, size - 1 - k, n, depth)))
    pick = rng.randrange(sum(w for _, _, w in options))
    for kind, k, w in options:
        if pick < w:
            break
        pick -= w
    if kind == "lam":
        return Lam(_bname(depth), _sample(universe, size - 1, pool, depth + 1, rng))
    if kind == "app":
        return App(_sample(universe, k, pool, depth, rng), _sample(universe, size - 1 - k, pool, depth, rng))
    if kind == "jump":
        return Jump(
            _sample(universe, k, pool, depth + 1, rng), _bname(depth), _sample(universe, size - 1 - k, pool, depth, rng)
        )
    return VoidJump(_sample(universe, k, pool, depth, rng), _sample(universe, size - 1 - k, pool, depth, rng))


def sample_terms(universe: str, size: int, n: int, seed: int = 0, free_pool=("x", "y", "z")) -> list:
    """``n`` terms drawn uniformly among the α-classes of exactly ``size``."""
    pool = tuple(free_pool)
    if count_terms(universe, size, len(pool)) == 0:
        return []
    rng = random.Random(seed)
    return [alpha_canonical(_sample(universe, size, pool, 0, rng)) for _ in range(n)]


# ---------------------------------------------------------------- PSN

@dataclass
class PsnReport:
    max_size: int
    calculi: tuple
    candidates: int = 0
    beta_sn: int = 0
    results: dict = field(default_factory=dict)  # calculus -> {status: count}
    failures: list = field(default_factory=list)  # (calculus, term, verdict)
    millis: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures and all(
            counts.get(FAIL, 0) == 0 and counts.get(INCONCLUSIVE, 0) == 0 for counts in self.results.values()
        )


def psn_suite(
    max_size: int,
    calculi=("lambdaj_obox", "lambdaj_obox_u"),
    max_states: int = DEFAULT_MAX_STATES,
    max_depth: int = DEFAULT_MAX_DEPTH,
    progress=None,
) -> PsnReport:
    """Every closed β-SN λ-term up to ``max_size`` must be SN in each calculus."""
    started = time.perf_counter()
    report = PsnReport(max_size, tuple(calculi))
    report.results = {c: {} for c in calculi}
    for t in enumerate_terms("lambda", max_size, ()):
        report.candidates += 1
        if is_sn("beta", t, max_states=max_states, max_depth=max_depth) != PASS:
            continue
        report.beta_sn += 1
        for c in calculi:
            try:
                v = certify_sn(explore(c, t, max_states=max_states, max_depth=max_depth))
            except ClassCapExceeded:
                v = Verdict("sn", INCONCLUSIVE, detail={"status": "class-cap"})
            counts = report.results[c]
            counts[v.status] = counts.get(v.status, 0) + 1
            if v.status != PASS:
                report.failures.append((c, t, v))
        if progress:
            progress(report)
    report.millis = (time.perf_counter() - started) * 1000
    return report


def psn_verdict(report: PsnReport) -> Verdict:
    status = PASS
    if any(v.status == FAIL for _, _, v in report.failures):
        status = FAIL
    elif report.failures:
        status = INCONCLUSIVE
    ce = None
    if report.failures:
        c, t, v = report.failures[0]
        ce = f"{t} under {c}: {v.status}"
    return Verdict(
        "psn",
        status,
        ce,
        report.millis,
        {"candidates": report.candidates, "beta_sn": report.beta_sn, "results": report.results},
    )
