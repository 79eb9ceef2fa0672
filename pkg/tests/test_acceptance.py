"""Acceptance suite: every named verification check must pass.

Each check prints one PASS/FAIL line (run pytest with -s or look at the
captured output of a failure for the details).
"""

import pytest

from oslsim import verify


@pytest.mark.parametrize("name", verify.CRITERIA)
def test_criterion(name):
    result = verify.run_check(name)
    line = f"{'PASS' if result.passed else 'FAIL'} {name} ({result.seconds:.1f}s): {result.detail}"
    print(line)
    assert result.passed, line


@pytest.mark.parametrize("name", verify.INVARIANTS)
def test_invariant(name):
    result = verify.run_check(name)
    line = f"{'PASS' if result.passed else 'FAIL'} {name} ({result.seconds:.1f}s): {result.detail}"
    print(line)
    assert result.passed, line
