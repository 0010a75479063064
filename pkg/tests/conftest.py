import pytest

from oracles import RESULTS, sympy_rank


@pytest.fixture
def oracle_rank():
    return sympy_rank


def pytest_terminal_summary(terminalreporter):
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
