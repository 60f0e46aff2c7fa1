"""Command-line front end.

Exit codes: 0 pass, 1 fail, 2 inconclusive (a cap was hit), 3 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields

from .analysis import FAIL, INCONCLUSIVE, PASS, certify_sn, enumerate_terms, explore, sample_terms
from .equivalences import axiom_set
from .lambdaj import deterministic_step
from .projection import gc_project
from .rewrite import (
    ClassCapExceeded,
    RewriteError,
    Trace,
    axiom_moves,
    equiv_class,
    modulo_steps,
    modulo_trace,
    one_step_reducts,
    quotient_for,
)
from .suites import SUITES, SuiteConfig, run_suite
from .syntax import ParseError, parse, show
from .term import Term, alpha_canonical
from .zoo import CALCULI, build

EXIT = {PASS: 0, FAIL: 1, INCONCLUSIVE: 2}
USAGE = 3

POLICY = "leftmost-outermost redex; c keeps the leftmost occurrence on the original name"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------- config

def read_config(path: str) -> dict:
    """``key = value`` lines; ``#`` starts a comment."""
    out = {}
    with open(path) as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{n}: expected key=value")
            k, v = (s.strip() for s in line.split("=", 1))
            out[k.replace("-", "_")] = v
    return out


def suite_config(args) -> SuiteConfig:
    known = {f.name: f for f in fields(SuiteConfig)}
    values = {}
    if args.config:
        for k, v in read_config(args.config).items():
            if k not in known:
                raise UsageError(f"unknown config key {k!r}")
            values[k] = v
    for k in known:
        v = getattr(args, k, None)
        if v is not None:
            values[k] = v
    cfg = SuiteConfig()
    for k, v in values.items():
        if k == "free_pool":
            v = tuple(s for s in str(v).replace(",", " ").split()) if isinstance(v, str) else tuple(v)
        elif isinstance(v, str):
            v = int(v)
        setattr(cfg, k, v)
    return cfg


# ---------------------------------------------------------------- helpers

def _term(args, text: str | None = None) -> Term:
    text = args.term if text is None else text
    void = getattr(args, "void", False) or getattr(args, "calculus", None) == "void"
    return alpha_canonical(parse(text, void=void))


def _system(args):
    if args.calculus not in CALCULI:
        raise UsageError(f"unknown calculus {args.calculus!r}; choose from {', '.join(CALCULI)}")
    sys_ = build(args.calculus)
    if getattr(args, "h_cap", None) is not None:
        sys_ = sys_.with_params(h_cap=args.h_cap)
    return sys_


def deterministic_trace(rs, t: Term, max_steps: int) -> tuple:
    """Follow the deterministic policy; modulo axioms, fall back to the
    first successor class when the current member is normal."""
    q = quotient_for(rs.axioms)
    cur = alpha_canonical(t)
    steps = []
    for _ in range(max_steps):
        st = deterministic_step(rs, cur)
        if st is None and rs.axioms:
            succ = modulo_steps(rs, cur, q)
            st = succ[0][0] if succ else None
        if st is None:
            return modulo_trace(q, t, steps), True
        steps.append(st)
        cur = st.target
    return modulo_trace(q, t, steps), False


def _print_trace(tr: Trace, out):
    print(show(tr.initial), file=out)
    for st in tr.steps:
        arrow = "->" if st.kind == "rule" else "=="
        print(f"  {arrow} {st.describe():<14} {show(st.target)}", file=out)


# ---------------------------------------------------------------- commands

def cmd_norm(args, out) -> int:
    rs = _system(args)
    t = _term(args)
    if args.strategy == "all":
        g = explore(rs, t, args.max_states or 50_000, args.max_depth or 30)
        normals = [s for s in g.states if not g.edges.get(s) and g.depth[s] < g.caps["max_depth"]]
        for s in sorted(normals, key=Term.sort_key):
            print(show(s), file=out)
        sn = certify_sn(g)
        print(f"# {len(normals)} normal form(s), {len(g.states)} states, {g.status}, sn: {sn.status}", file=out)
        return 0 if g.complete else EXIT[INCONCLUSIVE]
    tr, done = deterministic_trace(rs, t, args.max_steps)
    if args.command == "trace":
        _print_trace(tr, out)
    else:
        print(show(tr.final), file=out)
    status = "normal form" if done else f"stopped after {args.max_steps} steps"
    print(f"# {len(tr.rule_steps())} steps ({status}); policy: {POLICY}", file=out)
    return 0 if done else EXIT[INCONCLUSIVE]


def _moves(rs, t: Term) -> list:
    return one_step_reducts(rs, t) + axiom_moves(rs.axioms, t)


def cmd_step(args, out) -> int:
    """Pick redexes by number; ``u`` undoes, ``q`` quits."""
    rs = _system(args)
    history = [_term(args)]
    picks: list = []
    if args.replay:
        with open(args.replay) as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
    else:
        lines = None
    source = iter(lines) if lines is not None else None
    interactive = source is None and sys.stdin.isatty()
    while True:
        cur = history[-1]
        moves = _moves(rs, cur)
        print(show(cur), file=out)
        for i, st in enumerate(moves, 1):
            tag = "rule " if st.kind == "rule" else "axiom"
            print(f"  [{i}] {tag} {st.describe():<14} {show(st.target)}", file=out)
        if not moves:
            print("  (normal form, no axiom moves)", file=out)
        if source is not None:
            line = next(source, "q")
        else:
            if interactive:
                print("pick> ", end="", file=out, flush=True)
            line = sys.stdin.readline()
            line = line.strip() if line else "q"
        if line in ("q", "quit"):
            break
        if line in ("u", "undo"):
            if len(history) > 1:
                history.pop()
                picks.pop()
            continue
        try:
            k = int(line)
            st = moves[k - 1]
            if k < 1:
                raise IndexError
        except (ValueError, IndexError):
            print(f"  no move {line!r}", file=out)
            if source is not None:
                return USAGE
            continue
        history.append(st.target)
        picks.append(str(k))
    if args.save:
        with open(args.save, "w") as fh:
            fh.write("\n".join(picks + ["q"]) + "\n")
    print(f"# final: {show(history[-1])} after {len(picks)} move(s)", file=out)
    return 0


def cmd_classes(args, out) -> int:
    axioms = axiom_set(args.axioms)
    t = _term(args)
    members = sorted(equiv_class(axioms, t, cap=args.max_states or 100_000), key=Term.sort_key)
    for m in members:
        print(show(m), file=out)
    print(f"# {len(members)} member(s) under {args.axioms}", file=out)
    return 0


def cmd_check(args, out) -> int:
    cfg = suite_config(args)
    report = run_suite(args.suite, cfg)
    text = json.dumps(report.to_json(), indent=2, ensure_ascii=False)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text + "\n")
    print(text, file=out)
    return EXIT[report.status]


def cmd_graph(args, out) -> int:
    rs = _system(args)
    g = explore(rs, _term(args), args.max_states or 50_000, args.max_depth or 30)
    dot = g.to_dot()
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(dot + "\n")
        print(f"# {len(g.states)} states, {g.status}; written to {args.output}", file=out)
    else:
        print(dot, file=out)
    return 0 if g.complete else EXIT[INCONCLUSIVE]


def cmd_enum(args, out) -> int:
    pool = tuple(args.pool.replace(",", " ").split()) if args.pool else ()
    if args.sample:
        terms = sample_terms(args.universe, args.max_size, args.sample, seed=args.seed or 0, free_pool=pool)
    else:
        terms = enumerate_terms(args.universe, args.max_size, pool)
    n = 0
    for t in terms:
        print(show(t), file=out)
        n += 1
    print(f"# {n} term(s)", file=out)
    return 0


def cmd_project(args, out) -> int:
    print(show(gc_project(_term(args))), file=out)
    return 0


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="artifact", description="Structural lambda-calculus with jumps.")
    p.add_argument("--config", help="key=value file with caps and seeds; flags override it")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def calc(sp, default="lambdaj"):
        sp.add_argument("--calculus", "-c", default=default, help=f"one of: {', '.join(CALCULI)}")
        sp.add_argument("--h-cap", type=int, dest="h_cap", help="list length cap of the h rule")
        sp.add_argument("--void", action="store_true", help="parse void jumps t[_/u]")

    def caps(sp):
        sp.add_argument("--max-states", type=int, dest="max_states")
        sp.add_argument("--max-depth", type=int, dest="max_depth")

    for name in ("norm", "trace"):
        sp = sub.add_parser(name, help="normalise a term" if name == "norm" else "print the reduction")
        calc(sp)
        caps(sp)
        sp.add_argument("--strategy", choices=("det", "all"), default="det")
        sp.add_argument("--max-steps", type=int, default=10_000, dest="max_steps")
        sp.add_argument("term")

    sp = sub.add_parser("step", help="interactive stepper")
    calc(sp)
    sp.add_argument("--replay", help="file of picks (one per line) to replay")
    sp.add_argument("--save", help="write the picks of this session to a file")
    sp.add_argument("term")

    sp = sub.add_parser("classes", help="list the equivalence class of a term")
    sp.add_argument("--axioms", required=True, help="set name (CS, o, box, obox, n, sigmahat, pi) or id list")
    sp.add_argument("--void", action="store_true")
    sp.add_argument("--max-states", type=int, dest="max_states")
    sp.add_argument("term")

    sp = sub.add_parser("check", help="run a property suite and print a JSON report")
    sp.add_argument("suite", choices=sorted(SUITES))
    sp.add_argument("--max-size", type=int, dest="max_size")
    sp.add_argument("--pool", dest="free_pool", help="free names, comma separated")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--samples", type=int)
    sp.add_argument("--h-cap", type=int, dest="h_cap")
    sp.add_argument("--budget", type=int)
    sp.add_argument("--join-depth", type=int, dest="join_depth")
    sp.add_argument("--report", help="also write the report to this file")
    caps(sp)

    sp = sub.add_parser("graph", help="reduction graph (DOT)")
    calc(sp)
    caps(sp)
    sp.add_argument("--dot", action="store_true", help="emit Graphviz DOT (the only format)")
    sp.add_argument("--output", "-o", help="write to this file instead of stdout")
    sp.add_argument("term")

    sp = sub.add_parser("enum", help="enumerate or sample terms")
    sp.add_argument("--universe", choices=("lambda", "j", "void"), default="lambda")
    sp.add_argument("--max-size", type=int, default=4, dest="max_size")
    sp.add_argument("--pool", default="x,y,z")
    sp.add_argument("--sample", type=int, help="draw this many terms of exactly --max-size")
    sp.add_argument("--seed", type=int)

    sp = sub.add_parser("project", help="projection onto void terms")
    sp.add_argument("term")
    return p


COMMANDS = {
    "norm": cmd_norm,
    "trace": cmd_norm,
    "step": cmd_step,
    "classes": cmd_classes,
    "check": cmd_check,
    "graph": cmd_graph,
    "enum": cmd_enum,
    "project": cmd_project,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except (UsageError, ParseError, ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE
    except (RewriteError, ClassCapExceeded) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT[INCONCLUSIVE]


if __name__ == "__main__":
    sys.exit(main())
