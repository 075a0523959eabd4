"""Acceptance gate: every criterion at its stated tolerance and time budget.

Each test runs one criterion via the selftest module and prints a single
pass/fail line; the assertions pin both the verdict and the runtime budget.
Run with ``pytest -s tests/test_acceptance.py`` to see the lines as they
complete, or ``bohrlab selftest`` for the same checks outside pytest.
"""

import pytest

from bohrlab.selftest import CRITERIA, RUNTIME_BUDGETS, run_criterion


@pytest.mark.parametrize(
    "number,name",
    [(num, name) for num, name, _ in CRITERIA],
    ids=[f"{num}-{name}" for num, name, _ in CRITERIA],
)
def test_acceptance_criterion(number, name):
    result = run_criterion(number)
    verdict = "PASS" if result.passed else "FAIL"
    print(
        f"ACCEPTANCE {result.number} {result.name}: {verdict} "
        f"({result.seconds:.2f}s) {result.detail}"
    )
    assert result.passed, f"criterion {number} ({name}): {result.detail}"
    budget = RUNTIME_BUDGETS[number]
    assert result.seconds < budget, (
        f"criterion {number} took {result.seconds:.2f}s, budget {budget}s"
    )
