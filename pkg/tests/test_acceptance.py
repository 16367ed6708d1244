"""Acceptance criteria 1-12, one test per criterion.

The criteria are evaluated once per module; their pass/fail lines are
printed in the terminal summary.
"""

import pytest

from conftest import ACCEPTANCE_LINES
from progfree.acceptance import TITLES, format_results, run_all


@pytest.fixture(scope="module")
def results(pytestconfig):
    res = run_all(seed=42)
    pytestconfig.stash[ACCEPTANCE_LINES].extend(format_results(res).splitlines())
    return {r.number: r for r in res}


@pytest.mark.parametrize("number", list(TITLES), ids=[f"criterion_{n}" for n in TITLES])
def test_criterion(results, number):
    r = results[number]
    assert r.passed, r.detail
