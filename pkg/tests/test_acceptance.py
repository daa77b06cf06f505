"""The eleven acceptance criteria, one test each, with a PASS/FAIL line per
criterion printed to the terminal."""

import pytest

from nlogic.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda c: f"criterion_{c.number:02d}")
def test_criterion(criterion, capsys):
    result = run_criterion(criterion)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail
    assert result.within_budget, f"{result.seconds:.1f}s over the {result.budget:g}s budget"
