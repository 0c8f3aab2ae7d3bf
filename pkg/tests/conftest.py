from fractions import Fraction

import pytest
from hypothesis import strategies as st

from lambdacert.poly import Polynomial

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def record_criterion():
    def _record(ok: bool, label: str):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {label}")
        print(ACCEPTANCE_LINES[-1])
        return ok

    return _record


fractions_st = st.builds(
    Fraction,
    st.integers(-99, 99),
    st.integers(1, 99),
)


@st.composite
def polynomials(draw, max_degree=8):
    coeffs = draw(st.lists(fractions_st, min_size=0, max_size=max_degree + 1))
    return Polynomial(coeffs)
