#!/usr/bin/env python3
"""Run property suites and write one JSON report per suite.

    python3 scripts/run_suites.py --out reports fc psn
"""

import argparse
import json
import pathlib
import time

from artifact.suites import SUITES, SuiteConfig, run_suite


def main():
    p = argparse.ArgumentParser()
    p.add_argument("suites", nargs="*", default=sorted(SUITES))
    p.add_argument("--out", default="reports")
    p.add_argument("--max-size", type=int)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name in args.suites:
        t0 = time.perf_counter()
        report = run_suite(name, SuiteConfig(max_size=args.max_size, seed=args.seed))
        (out / f"{name}.json").write_text(json.dumps(report.to_json(), indent=2, ensure_ascii=False) + "\n")
        print(f"{name:15s} {report.status:13s} {time.perf_counter() - t0:8.1f}s", flush=True)


if __name__ == "__main__":
    main()
