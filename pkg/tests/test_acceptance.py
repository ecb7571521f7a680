"""The twelve acceptance criteria, one test each.

Every result line is printed as it runs (visible with -s) and collected for
the terminal summary.
"""

import pytest

from oddkh.verify import CRITERIA, run_criterion

LINES: list[str] = []


@pytest.mark.parametrize("number", [num for num, *_ in CRITERIA], ids=[t for _, t, *_ in CRITERIA])
def test_criterion(number):
    result = run_criterion(number)
    LINES.append(result.line())
    print(result.line())
    assert result.passed, result.line()
