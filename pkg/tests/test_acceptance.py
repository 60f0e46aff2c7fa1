"""Acceptance criteria 1-12 at full size.

Each criterion runs its suites once and prints one ``PASS``/``FAIL`` line.
Under pytest the lines are collected into the terminal summary; run the file
directly (``python3 tests/test_acceptance.py``) to get them on stdout.
Set ``ARTIFACT_QUICK=1`` to shrink every corpus for a smoke run.
"""

import os
import time

import pytest

from artifact.suites import SuiteConfig, run_suite

QUICK = os.environ.get("ARTIFACT_QUICK") == "1"
RESULTS: dict = {}

# (suites, time limit in seconds or None, quick-mode max_size)
CRITERIA = {
    1: ("full composition", ("fc",), 120, 5),
    2: ("j-confluence and termination", ("j-confluence",), None, 4),
    3: ("worked constants", ("measures",), None, None),
    4: ("bisimulations", ("bisim-o", "bisim-void", "bisim-sigmahat"), None, 4),
    5: ("norm invariance on sigma-hat classes", ("barendregt",), 300, 6),
    6: ("divergence under n, SN under obox", ("guerrini",), None, None),
    7: ("PSN up to size 9", ("psn",), 900, 6),
    8: ("projection", ("projection",), None, 4),
    9: ("propagation termination", ("inner", "outer"), None, 4),
    10: ("les simulation", ("les-sim",), None, 4),
    11: ("diamond and w-postponement", ("diamond",), None, 4),
    12: ("void step lemma", ("void-step",), None, 4),
}


def _first_failure(reports):
    for r in reports:
        for v in r.verdicts:
            if v.status != "pass":
                return f"{r.suite}/{v.id} {v.status}: {v.counterexample or v.detail}"
    return None


def run_criterion(n: int):
    title, suites, limit, quick_size = CRITERIA[n]
    cfg = SuiteConfig(max_size=quick_size if QUICK else None, samples=100 if QUICK else 1000)
    t0 = time.perf_counter()
    reports = [run_suite(s, cfg) for s in suites]
    secs = time.perf_counter() - t0
    why = _first_failure(reports)
    if why is None and limit is not None and secs > limit:
        why = f"took {secs:.0f}s, limit {limit}s"
    line = f"{'PASS' if why is None else 'FAIL'} criterion {n:2d} ({title}) {secs:7.1f}s"
    if why:
        line += f"  -- {str(why)[:300]}"
    RESULTS[n] = line
    print(line, flush=True)
    return why


@pytest.mark.acceptance
@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n):
    why = run_criterion(n)
    assert why is None, why


if __name__ == "__main__":
    bad = [n for n in sorted(CRITERIA) if run_criterion(n) is not None]
    raise SystemExit(1 if bad else 0)
