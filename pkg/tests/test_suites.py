import json

import pytest

from artifact.suites import SUITES, SuiteConfig, run_suite

SMALL = {
    "fc": 4,
    "j-confluence": 4,
    "bisim-o": 4,
    "barendregt": 5,
    "projection": 3,
    "psn": 5,
    "inner": 4,
    "outer": 4,
    "les-sim": 4,
    "perm": 4,
    "cr-modulo": 4,
    "diamond": 4,
    "void-step": 3,
}


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suite_passes_at_small_size(name):
    cfg = SuiteConfig(max_size=SMALL.get(name), samples=50)
    report = run_suite(name, cfg)
    assert report.status == "pass", [v.to_json() for v in report.verdicts if not v.passed]
    doc = json.loads(json.dumps(report.to_json()))
    assert {"suite", "params", "caps", "verdicts"} <= set(doc)
    assert all(v["status"] == "pass" for v in doc["verdicts"])


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("nope")


def test_report_is_reproducible():
    cfg = SuiteConfig(max_size=4, samples=40, seed=3)
    a = [v.detail for v in run_suite("diamond", cfg).verdicts]
    b = [v.detail for v in run_suite("diamond", cfg).verdicts]
    assert a == b
