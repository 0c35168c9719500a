"""Acceptance gate: one suite per criterion, fixed seed, one PASS/FAIL line each.

Run directly (``python tests/test_acceptance.py``) for the summary alone.
"""
import sys

import pytest

from cuntz.suites import SUITES

SEED = 0
CRITERIA = [
    (1, "axioms"),
    (2, "chi-oracle"),
    (3, "wb-additivity"),
    (4, "compactness"),
    (5, "cancellation"),
    (6, "uhf-table"),
    (7, "graph-iso"),
    (8, "pullback-approximants"),
    (9, "continuity"),
    (10, "zpq-compacts"),
]


def run_criterion(number, key):
    result = SUITES[key](seed=SEED)
    return result, f"criterion {number:2d}: {result.line()}"


@pytest.mark.acceptance
@pytest.mark.parametrize("number, key", CRITERIA, ids=[f"criterion-{n}-{k}" for n, k in CRITERIA])
def test_criterion(number, key, capsys):
    result, line = run_criterion(number, key)
    with capsys.disabled():
        print(f"\n{line}")
    assert result.ok, result.detail


if __name__ == "__main__":
    failed = 0
    for number, key in CRITERIA:
        result, line = run_criterion(number, key)
        print(line, flush=True)
        failed += not result.ok
    sys.exit(1 if failed else 0)
