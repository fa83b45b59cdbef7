"""Acceptance battery: every criterion at its stated tolerance.

The criteria live in haarforge.verify so that ``haar-forge verify`` and
this module are the same code path.  Each test prints its pass/fail line
(visible under ``pytest -s`` / ``-v``).
"""

import pytest

from haarforge import verify

SEED = 1


@pytest.mark.parametrize("criterion", verify.CRITERIA,
                         ids=[fn.__name__ for fn in verify.CRITERIA])
def test_criterion(criterion):
    result = criterion(SEED)
    flag = "PASS" if result.passed else "FAIL"
    print(f"[{flag}] criterion {result.name} ({result.elapsed:.1f} s)")
    for line in result.lines():
        print(line)
    failing = [c for c in result.checks if not c["passed"]]
    assert result.passed, (
        f"criterion {result.name}: "
        + "; ".join(f"{c['label']} -> {c['detail']}" for c in failing))
