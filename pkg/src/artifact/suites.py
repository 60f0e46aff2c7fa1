"""Property suites: each one checks a family of instances exhaustively up to
a size bound and returns verdicts for the JSON report."""

from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass, field

from .analysis import (
    FAIL,
    INCONCLUSIVE,
    PASS,
    Verdict,
    _reachable,
    bisim_failures,
    certify_sn,
    detect_divergence,
    enumerate_terms,
    explore,
    local_confluence,
    psn_suite,
    psn_verdict,
    replay_bisim_failure,
    sample_terms,
    strong_bisim_check,
)
from .equivalences import CS, O, OBOX, SIGMA_HAT
from .lambdaj import (
    full_composition_witness,
    j_normal_form,
    j_system,
    lambdaj_system,
    notgc_count,
    parallel_reducts,
    postpone_w,
    postponed_trace,
)
from .lambdavoid import step_lemma_violations, surface_sn, void_sn
from .measures import StateCapExceeded, eta, inner_measure, j_measure, outer_measure, potential_multiplicity
from .projection import check_projection_step, projection_table
from .rewrite import (
    ClassCapExceeded,
    Quotient,
    RewriteError,
    RewriteSystem,
    Trace,
    axiom_moves,
    one_step_reducts,
    quotient_for,
    validate_trace,
)
from .syntax import parse, show
from .term import alpha_canonical, enumerate_splits, multiplicity, rename_at, subst
from .zoo import (
    build,
    propagation_normal_form,
    simulate_les_step,
    simulate_permutative_step,
)

GUERRINI = "(z z)[z/y][x/(z z)[z/y]]"
OBOX_ERASURE = ("z[x/y][y/u]", "z[x/y[y/u]]", "z")
VOID_COUNTEREXAMPLE = ("x[_/t[_/x] v]", "x[_/(t v)[_/x]]")
SIGMAHAT_COUNTEREXAMPLE = ("(\\y.(\\x.y) z1) z2", "(\\x.\\y.y) z1 z2")


@dataclass
class SuiteConfig:
    """Knobs shared by all suites; ``max_size`` None means the suite default."""

    max_size: int | None = None
    free_pool: tuple = ("x", "y", "z")
    max_states: int = 50_000
    max_depth: int = 30
    seed: int = 0
    samples: int = 1000
    h_cap: int = 3
    budget: int = 6
    join_depth: int = 6

    def caps(self) -> dict:
        return {"max_states": self.max_states, "max_depth": self.max_depth, "h_cap": self.h_cap}


@dataclass
class SuiteReport:
    suite: str
    params: dict
    caps: dict
    verdicts: list = field(default_factory=list)

    @property
    def status(self) -> str:
        states = {v.status for v in self.verdicts}
        if FAIL in states:
            return FAIL
        if INCONCLUSIVE in states:
            return INCONCLUSIVE
        return PASS

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "params": self.params,
            "caps": self.caps,
            "status": self.status,
            "verdicts": [v.to_json() for v in self.verdicts],
        }


class _Tally:
    """Collects instance results for one verdict; keeps the first failure."""

    def __init__(self, id: str):
        self.id = id
        self.started = time.perf_counter()
        self.checked = 0
        self.failed = 0
        self.inconclusive = 0
        self.first = None
        self.first_inconclusive = None
        self.extra: dict = {}

    def ok(self):
        self.checked += 1

    def fail(self, counterexample):
        self.checked += 1
        self.failed += 1
        if self.first is None:
            self.first = counterexample

    def record(self, good: bool, counterexample):
        if good:
            self.ok()
        else:
            self.fail(counterexample)

    def unknown(self, why):
        self.checked += 1
        self.inconclusive += 1
        if self.first_inconclusive is None:
            self.first_inconclusive = why

    def verdict(self) -> Verdict:
        detail = {"checked": self.checked, "failed": self.failed, "inconclusive": self.inconclusive, **self.extra}
        if self.failed:
            status, ce = FAIL, self.first
        elif self.inconclusive:
            status, ce = INCONCLUSIVE, self.first_inconclusive
        else:
            status, ce = PASS, None
        return Verdict(self.id, status, ce, (time.perf_counter() - self.started) * 1000, detail)


def _size(cfg: SuiteConfig, default: int) -> int:
    return default if cfg.max_size is None else cfg.max_size


def _corpus(universe: str, cfg: SuiteConfig, default: int):
    return enumerate_terms(universe, _size(cfg, default), cfg.free_pool)


def _check(id: str, cond: bool, ce=None, **detail) -> Verdict:
    return Verdict(id, PASS if cond else FAIL, None if cond else ce, detail=detail)


# ---------------------------------------------------------------- full composition

def suite_fc(cfg: SuiteConfig) -> list:
    """``t[x/u]`` reaches ``t{x/u}`` with a validated j-trace."""
    n = _size(cfg, 8)
    by_size: dict = {}
    for t in enumerate_terms("j", n - 1, cfg.free_pool):
        by_size.setdefault(t.size, []).append(t)
    sys = j_system()
    tally = _Tally("full-composition")
    only_dc = _Tally("full-composition-uses-d-c")
    for a in sorted(by_size):
        for b in sorted(by_size):
            if a + b > n:
                continue
            for t in by_size[a]:
                for u in by_size[b]:
                    for x in cfg.free_pool:
                        try:
                            tr = full_composition_witness(t, x, u)
                            validate_trace(tr, sys)
                            good = tr.final == alpha_canonical(subst(t, x, u))
                        except RewriteError as e:
                            tally.fail(f"{show(t)} [{x}/{show(u)}]: {e}")
                            continue
                        if good:
                            tally.ok()
                        else:
                            tally.fail(tr)
                        if multiplicity(t, x) >= 1:
                            if set(tr.rule_names()) <= {"d", "c"}:
                                only_dc.ok()
                            else:
                                only_dc.fail(tr)
    return [tally.verdict(), only_dc.verdict()]


# ---------------------------------------------------------------- j-confluence and termination

def suite_j_confluence(cfg: SuiteConfig) -> list:
    nf = _Tally("j-unique-normal-form")
    dm = _Tally("j-measure-decreases")
    sn = {c: _Tally(f"{c}-terminates") for c in ("j_o", "j_obox")}
    caps = dict(max_states=cfg.max_states, max_depth=cfg.max_depth)
    for t in _corpus("j", cfg, 7):
        g = explore("j", t, **caps)
        if not g.complete:
            nf.unknown(f"{show(t)}: {g.status}")
        else:
            normals = [s for s in g.states if not g.edges.get(s)]
            expected = alpha_canonical(j_normal_form(t))
            if g.find_cycle() is None and normals == [expected]:
                nf.ok()
            else:
                nf.fail(f"{show(t)}: normal forms {[show(s) for s in normals]}, expected {show(expected)}")
        for outs in g.edges.values():
            for st, _ in outs:
                if j_measure(st.source) > j_measure(st.target):
                    dm.ok()
                else:
                    dm.fail(Trace(st.source, [st]))
        for c, tally in sn.items():
            v = certify_sn(explore(c, t, **caps))
            if v.status == PASS:
                tally.ok()
            elif v.status == FAIL:
                tally.fail(v.counterexample)
            else:
                tally.unknown(f"{show(t)}: {v.detail}")
    return [nf.verdict(), dm.verdict()] + [s.verdict() for s in sn.values()]


# ---------------------------------------------------------------- constants

def suite_measures(cfg: SuiteConfig) -> list:
    """The worked examples: multiplicities, the j-measure, renaming,
    splits and the projection table."""
    out = []
    y = "y"
    m1 = potential_multiplicity(parse("(\\x.x x) y"), y)
    m2 = potential_multiplicity(parse("(x x)[x/y]"), y)
    out.append(_check("potential-multiplicity-redex", m1 == 1, f"M_y = {m1}", value=m1))
    out.append(_check("potential-multiplicity-jump", m2 == 2, f"M_y = {m2}", value=m2))
    dm = j_measure(parse("(x x)[x/y]"))
    out.append(_check("j-measure-example", dm.elements() == [2], f"dm = {dm}", value=dm.elements()))
    renamed = show(rename_at(parse("x z x x"), [(1, 1, 1), (2,)], "x", "y"))
    out.append(_check("renaming-example", renamed == "y z x y", renamed, value=renamed))
    splits = {show(s) for s in enumerate_splits(parse("x x x x"), "x", "y")}
    good = {"y x y x", "x y y y"} <= splits and "y y y y" not in splits
    out.append(_check("split-example", good, sorted(splits), splits=len(splits)))
    expected = [
        ("f[_/u]", "f[_/u]"),
        ("f[_/u v]", "f[_/u][_/v]"),
        ("f[_/u u]", "f[_/u]"),
        ("f[_/f[_/u v]] g", "(f[_/f] g)[_/u][_/v]"),
    ]
    rows = projection_table()
    got = [(show(g0), show(g1)) for _, _, g0, g1 in rows]
    out.append(_check("projection-table", got == expected, got, rows=got))
    tally = _Tally("projection-table-witnesses")
    for t, t1, _, _ in rows:
        steps = [s for s in one_step_reducts(lambdaj_system(), t) if s.name == "w" and s.target == alpha_canonical(t1)]
        if not steps:
            tally.fail(f"no w-step {show(t)} -> {show(t1)}")
            continue
        v = check_projection_step(t, steps[0], budget=cfg.budget, h_cap=cfg.h_cap)
        tally.record(v.ok, f"{show(t)}: {v.message}")
    out.append(tally.verdict())
    return out


# ---------------------------------------------------------------- bisimulations

def _expected_failure(id: str, v: Verdict, pair, step_name: str, axioms, c, reduct=None) -> Verdict:
    """Pass iff ``v`` failed and the class holds the expected diagram:
    ``pair`` equivalent, and a ``step_name`` step from one side (to
    ``reduct`` when given) unmatched by the other.  The diagram must replay."""
    if v.status != FAIL:
        return Verdict(id, FAIL, "the equivalence was not refuted", v.millis)
    want = {alpha_canonical(p) for p in pair}
    for f in bisim_failures(axioms, c, pair[0], first_only=False):
        if {f.left, f.right} != want or f.step.name != step_name:
            continue
        if reduct is not None and f.step.target != alpha_canonical(reduct):
            continue
        try:
            replayed = replay_bisim_failure(f, axioms, c)
        except RewriteError as e:
            return Verdict(id, FAIL, f"counterexample does not replay: {e}", v.millis)
        if replayed:
            return Verdict(id, PASS, None, v.millis, {"diagram": f.to_json()})
    return Verdict(id, FAIL, v.counterexample, v.millis)


def suite_bisim_o(cfg: SuiteConfig) -> list:
    corpus = list(_corpus("j", cfg, 6))
    out = [
        strong_bisim_check(CS, "lambdaj", corpus, id="CS-bisimulation"),
        strong_bisim_check(O, "lambdaj", corpus, id="o-bisimulation"),
    ]
    a, b, r = OBOX_ERASURE
    v = strong_bisim_check(OBOX, "lambdaj", [parse(a)], id="obox")
    out.append(_expected_failure("obox-erasure-diagram", v, (parse(a), parse(b)), "w", OBOX, "lambdaj", parse(r)))
    return out


def suite_bisim_void(cfg: SuiteConfig) -> list:
    a, b = (parse(s, void=True) for s in VOID_COUNTEREXAMPLE)
    sys = build("void").with_params(h_cap=cfg.h_cap)
    v = strong_bisim_check(O, sys, [a], id="void-o")
    return [_expected_failure("void-o-counterexample", v, (a, b), "h", O, sys)]


def suite_bisim_sigmahat(cfg: SuiteConfig) -> list:
    a, b = (parse(s) for s in SIGMAHAT_COUNTEREXAMPLE)
    v = strong_bisim_check(SIGMA_HAT, "beta", [a], id="sigmahat")
    return [_expected_failure("sigmahat-counterexample", v, (a, b), "beta", SIGMA_HAT, "beta")]


def suite_barendregt(cfg: SuiteConfig) -> list:
    """η_β is constant on the ≡σ̂-classes of β-SN λ-terms."""
    tally = _Tally("beta-norm-invariant")
    q = Quotient(SIGMA_HAT)
    beta = build("beta")
    done = set()
    classes = 0
    for t in _corpus("lambda", cfg, 9):
        r = q.rep(t)
        if r in done:
            continue
        done.add(r)
        if certify_sn(explore(beta, t, cfg.max_states, cfg.max_depth)).status != PASS:
            continue
        classes += 1
        norms = {}
        for m in q.members(r):
            try:
                norms[m] = eta(beta, m, cfg.max_states)
            except (StateCapExceeded, RuntimeError) as e:
                norms[m] = str(e)
        if len(set(norms.values())) == 1:
            tally.ok()
        else:
            tally.fail({show(m): n for m, n in sorted(norms.items(), key=lambda kv: kv[0].sort_key())})
    tally.extra["sn_classes"] = classes
    return [tally.verdict()]


# ---------------------------------------------------------------- Guerrini

def suite_guerrini(cfg: SuiteConfig) -> list:
    g = parse(GUERRINI)
    v = detect_divergence("lambdaj_n", g, depth=12, max_states=cfg.max_states)
    found = Verdict("lambdaj_n-self-embedding", PASS if v.status == FAIL else FAIL, None, v.millis, v.detail)
    if v.status == FAIL:
        try:
            validate_trace(v.counterexample, build("lambdaj_n"))
            found.detail = dict(v.detail, trace=[s.describe() for s in v.counterexample.steps])
        except RewriteError as e:
            found.status, found.counterexample = FAIL, f"trace does not replay: {e}"
    else:
        found.counterexample = f"divergence not detected: {v.status}"
    sn = certify_sn(explore("lambdaj_obox", g, cfg.max_states, cfg.max_depth))
    sn.id = "lambdaj_obox-sn"
    return [found, sn]


# ---------------------------------------------------------------- PSN

def suite_psn(cfg: SuiteConfig) -> list:
    report = psn_suite(_size(cfg, 9), max_states=cfg.max_states, max_depth=cfg.max_depth)
    return [psn_verdict(report)]


# ---------------------------------------------------------------- projection

def suite_projection(cfg: SuiteConfig) -> list:
    sys = build("lambdaj_obox_u")
    tally = _Tally("projection")
    clauses: dict = {}
    for t in _corpus("j", cfg, 6):
        moves = one_step_reducts(sys, t) + axiom_moves(OBOX, t)
        for st in moves:
            try:
                v = check_projection_step(t, st, budget=cfg.budget, h_cap=cfg.h_cap)
            except (RewriteError, ClassCapExceeded) as e:
                tally.fail(f"{show(t)} {st.describe()}: {e}")
                continue
            clauses[v.clause] = clauses.get(v.clause, 0) + 1
            if v.ok:
                tally.ok()
            else:
                tally.fail(f"{show(t)} {st.describe()} -> {show(st.target)}: {v.message}")
    tally.extra["clauses"] = clauses
    return [tally.verdict()]


# ---------------------------------------------------------------- propagation

def _propagation(kind: str, measure, cfg: SuiteConfig) -> list:
    sys = build(kind)
    dec = _Tally(f"{kind}-measure-decreases")
    inv = _Tally(f"{kind}-measure-cs-invariant")
    nf = _Tally(f"{kind}-normal-form")
    for t in _corpus("j", cfg, 7):
        m = measure(t)
        for st in one_step_reducts(sys, t):
            dec.record(measure(st.target) < m, Trace(t, [st]))
        for st in axiom_moves(CS, t):
            inv.record(measure(st.target) == m, Trace(t, [st]))
        try:
            propagation_normal_form(kind, t)
            nf.ok()
        except RewriteError as e:
            nf.fail(f"{show(t)}: {e}")
    return [dec.verdict(), inv.verdict(), nf.verdict()]


def suite_inner(cfg: SuiteConfig) -> list:
    return _propagation("in", inner_measure, cfg)


def suite_outer(cfg: SuiteConfig) -> list:
    return _propagation("out", outer_measure, cfg)


# ---------------------------------------------------------------- λes

def _decomposition_ok(name: str, tr: Trace) -> bool:
    names = tr.rule_names()
    if name == "les:@":
        return names[0] == "c" and sorted(names[1:]) == ["in2", "in3"]
    if name == "les:comp2":
        return names[0] == "c" and len(names) > 1 and all(n.startswith("in") for n in names[1:])
    return True


def suite_les_sim(cfg: SuiteConfig) -> list:
    les = build("les")
    inner = build("inner")
    q = quotient_for(inner.axioms)
    tally = _Tally("les-simulation")
    shape = _Tally("les-decomposition-shape")
    per_rule: dict = {}
    for t in _corpus("j", cfg, 7):
        for st in one_step_reducts(les, t):
            if st.position != ():
                continue
            per_rule[st.name] = per_rule.get(st.name, 0) + 1
            try:
                tr = simulate_les_step(t, st, budget=cfg.budget)
                validate_trace(tr, inner)
                good = q.equivalent(tr.final, st.target)
            except RewriteError as e:
                tally.fail(f"{show(t)} {st.describe()}: {e}")
                continue
            tally.record(good, tr)
            if st.name in ("les:@", "les:comp2"):
                shape.record(_decomposition_ok(st.name, tr), tr)
    tally.extra["instances"] = per_rule
    return [tally.verdict(), shape.verdict()]


# ---------------------------------------------------------------- permutative calculus

def suite_perm(cfg: SuiteConfig) -> list:
    perm = build("permutative")
    tally = _Tally("permutative-simulation")
    for t in _corpus("lambda", cfg, 6):
        for st in one_step_reducts(perm, t):
            try:
                tr = simulate_permutative_step(t, st)
                validate_trace(tr, build("structural_modulo"))
                tally.ok()
            except RewriteError as e:
                tally.fail(f"{show(t)} {st.describe()}: {e}")
    return [tally.verdict()]


# ---------------------------------------------------------------- Church-Rosser modulo

def suite_cr_modulo(cfg: SuiteConfig) -> list:
    """Equivalent terms reduce to equivalent terms (one step each side,
    joined within ``join_depth``), and plain λj peaks join."""
    out = []
    n = _size(cfg, 5)
    corpus = list(enumerate_terms("j", n, cfg.free_pool))
    for name, axioms in (("CS", CS), ("o", O)):
        tally = _Tally(f"church-rosser-modulo-{name}")
        sys = lambdaj_system()
        q = Quotient(axioms)
        msys = RewriteSystem(f"lambdaj_{name}", sys.rules, axioms)
        done = set()
        for t in corpus:
            r = q.rep(t)
            if r in done:
                continue
            done.add(r)
            members = sorted(q.members(r), key=lambda m: m.sort_key())
            t0 = members[0]
            for t1 in members[1:]:
                for s0 in one_step_reducts(sys, t0)[:3]:
                    for s1 in one_step_reducts(sys, t1)[:3]:
                        a = _reachable(msys, q, q.rep(s0.target), cfg.join_depth)
                        b = _reachable(msys, q, q.rep(s1.target), cfg.join_depth)
                        tally.record(bool(a & b), f"{show(s0.target)} / {show(s1.target)}")
        out.append(tally.verdict())
    lc = _Tally("lambdaj-local-confluence")
    for t in corpus:
        v = local_confluence("lambdaj", t, cfg.join_depth)
        lc.record(v.status == PASS, v.counterexample)
    out.append(lc.verdict())
    return out


# ---------------------------------------------------------------- diamond and postponement

def _random_trace(rng: random.Random, cfg: SuiteConfig) -> Trace:
    sys = lambdaj_system()
    size = rng.randint(5, 10)
    t = sample_terms("j", size, 1, seed=rng.randrange(1 << 30), free_pool=cfg.free_pool)[0]
    tr = Trace(t)
    for _ in range(rng.randint(1, 8)):
        steps = one_step_reducts(sys, tr.final)
        if not steps:
            break
        tr.steps.append(rng.choice(steps))
    return tr


def suite_diamond(cfg: SuiteConfig) -> list:
    dia = _Tally("parallel-diamond")
    for t in _corpus("lambda", cfg, 6):
        reds = sorted(parallel_reducts(t), key=lambda s: s.sort_key())
        par = {u: parallel_reducts(u) for u in reds}
        for i, u1 in enumerate(reds):
            for u2 in reds[i + 1 :]:
                dia.record(bool(par[u1] & par[u2]), f"{show(u1)} <= {show(t)} => {show(u2)}")
    post = _Tally("w-postponement")
    unattainable = 0
    rng = random.Random(cfg.seed)
    sys = lambdaj_system()
    for _ in range(cfg.samples):
        tr = _random_trace(rng, cfg)
        try:
            p = postpone_w(tr)
            validate_trace(p, sys)
        except RewriteError as e:
            post.fail(f"{show(tr.initial)}: {e}")
            continue
        names = p.rule_names()
        w_last = "w" not in names or all(n == "w" for n in names[names.index("w") :])
        k = notgc_count(tr)
        if p.final == tr.final and notgc_count(p) == k and w_last:
            post.ok()
            continue
        # settle whether any reordering keeps the count, not just ours
        exists = postponed_trace(tr.initial, tr.final, k) is not None
        unattainable += not exists
        post.fail(
            f"{show(tr.initial)} ->* {show(tr.final)}: {k} notgc step(s) before, "
            f"{notgc_count(p)} after; equal-count reordering exists: {exists}"
        )
    post.extra["no-equal-count-reordering"] = unattainable
    return [dia.verdict(), post.verdict()]


# ---------------------------------------------------------------- void step lemma

def suite_void_step(cfg: SuiteConfig) -> list:
    sys = build("void").with_params(h_cap=cfg.h_cap)
    tally = _Tally("void-step-lemma")
    skipped = 0
    for t in _corpus("void", cfg, 6):
        try:
            if not (void_sn(t, cfg.h_cap) and surface_sn(frozenset(), t, lambda u: void_sn(u, cfg.h_cap))):
                skipped += 1
                continue
            bad = step_lemma_violations(t, frozenset(), sys)
        except (StateCapExceeded, ClassCapExceeded) as e:
            tally.unknown(f"{show(t)}: {e}")
            continue
        if bad:
            st, why = bad[0]
            tally.fail({"term": show(t), "step": st.describe(), "target": show(st.target), "reason": why})
        else:
            tally.ok()
    tally.extra["excluded"] = skipped
    return [tally.verdict()]


SUITES = {
    "fc": suite_fc,
    "j-confluence": suite_j_confluence,
    "measures": suite_measures,
    "bisim-o": suite_bisim_o,
    "bisim-void": suite_bisim_void,
    "bisim-sigmahat": suite_bisim_sigmahat,
    "barendregt": suite_barendregt,
    "guerrini": suite_guerrini,
    "projection": suite_projection,
    "psn": suite_psn,
    "inner": suite_inner,
    "outer": suite_outer,
    "les-sim": suite_les_sim,
    "perm": suite_perm,
    "cr-modulo": suite_cr_modulo,
    "diamond": suite_diamond,
    "void-step": suite_void_step,
}


def run_suite(name: str, cfg: SuiteConfig | None = None) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    cfg = cfg or SuiteConfig()
    params = {k: v for k, v in asdict(cfg).items() if k not in ("max_states", "max_depth", "h_cap")}
    params["free_pool"] = list(cfg.free_pool)
    report = SuiteReport(name, params, cfg.caps())
    report.verdicts = SUITES[name](cfg)
    return report

