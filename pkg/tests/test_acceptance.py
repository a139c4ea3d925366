"""Runs every acceptance criterion at its stated case counts, exactly.

Each criterion prints one PASS/FAIL line.  Run directly for the table only:
    python3 tests/test_acceptance.py [--seed N]
"""

import argparse
import sys

import pytest

from divfree.acceptance import CRITERIA, run_acceptance

SEED = 0


@pytest.mark.parametrize("number", sorted(CRITERIA), ids=lambda n: f"{n:02d}-{CRITERIA[n][0].replace(' ', '-')}")
def test_criterion(number, capsys):
    (result,) = run_acceptance(SEED, [number], report=None)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="print the acceptance table")
    parser.add_argument("--seed", type=int, default=SEED)
    args = parser.parse_args()
    results = run_acceptance(args.seed)
    sys.exit(0 if all(r.passed for r in results) else 1)
