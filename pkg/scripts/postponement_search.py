#!/usr/bin/env python3
"""Exhaustively look for two-step traces ``w`` then a notgc step whose
endpoints admit no reordering with the same number of notgc steps."""

import argparse

from artifact.analysis import enumerate_terms
from artifact.lambdaj import lambdaj_system, postponed_trace
from artifact.rewrite import one_step_reducts
from artifact.syntax import show

p = argparse.ArgumentParser()
p.add_argument("--max-size", type=int, default=7)
args = p.parse_args()

sys = lambdaj_system()
pairs = bad = 0
for t in enumerate_terms("j", args.max_size):
    for w in one_step_reducts(sys, t):
        if w.name != "w":
            continue
        for g in one_step_reducts(sys, w.target):
            if g.name == "w":
                continue
            pairs += 1
            if postponed_trace(t, g.target, 1) is None:
                bad += 1
                if bad <= 10:
                    print(f"{show(t)} ->w {show(w.target)} ->{g.name} {show(g.target)}")
print(f"# {pairs} w/notgc pairs, {bad} without an equal-count reordering")
