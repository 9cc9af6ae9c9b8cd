"""Acceptance criteria 1-11, each at zero tolerance.

Every criterion prints one PASS/FAIL line; the lines are repeated in the
terminal summary so they survive output capture. Run this file directly to
get only those lines.
"""
import sys

import pytest

from horn_bailey.acceptance import CRITERIA, run_criterion

SEED = 0
SUMMARY_LINES = []


@pytest.mark.parametrize("number", sorted(CRITERIA), ids=lambda n: f"criterion_{n:02d}_{CRITERIA[n][0].replace(' ', '_')}")
def test_criterion(number):
    outcome = run_criterion(number, SEED)
    line = outcome.summary()
    print(line)
    SUMMARY_LINES.append(line)
    failures = [r.to_json() for r in outcome.results if not r.passed]
    assert outcome.passed, failures


def test_all_criteria_are_covered():
    assert sorted(CRITERIA) == list(range(1, 12))


if __name__ == "__main__":
    ok = True
    for n in sorted(CRITERIA):
        outcome = run_criterion(n, SEED)
        print(outcome.summary())
        ok &= outcome.passed
    sys.exit(0 if ok else 1)
