"""One test per acceptance criterion.

Each result line is printed in the pytest terminal summary (see conftest.py).
Running this file directly prints the same lines and exits nonzero on failure.
"""

import sys

import pytest

from intdiff.acceptance import CHECKS, run_check

RESULTS = {}


@pytest.mark.parametrize("check", CHECKS, ids=[f"{k + 1:02d}-{c.__name__[6:]}" for k, c in enumerate(CHECKS)])
def test_criterion(check):
    result = run_check(check)
    RESULTS[result.number] = result
    print(result.line())
    assert result.passed, result.detail


if __name__ == "__main__":
    failed = 0
    for check in CHECKS:
        result = run_check(check)
        print(result.line(), flush=True)
        failed += not result.passed
    sys.exit(1 if failed else 0)
