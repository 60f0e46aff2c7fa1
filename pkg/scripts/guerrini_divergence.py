#!/usr/bin/env python3
"""Print the self-embedding trace of (zz)[z/y][x/(zz)[z/y]] under the box0
equivalences, and the complete reduction graph size without them."""

from artifact.analysis import detect_divergence, explore
from artifact.suites import GUERRINI
from artifact.syntax import parse, show
from artifact.term import alpha_canonical

t = alpha_canonical(parse(GUERRINI))
v = detect_divergence("lambdaj_n", t, depth=12)
print(f"lambdaj_n: {v.status}")
tr = v.counterexample
print(f"  {show(tr.initial)}")
for st in tr.steps:
    arrow = "->" if st.kind == "rule" else "=="
    print(f"  {arrow} {st.describe():<12} {show(st.target)}")
print(f"  embedding: {v.detail.get('embedding')}")
g = explore("lambdaj_obox", t)
print(f"lambdaj_obox: {g.status}, {len(g.states)} classes, cycle: {g.find_cycle() is not None}")
