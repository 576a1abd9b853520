import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from solvergen.bench.generators import gen_bibd, gen_golomb, gen_queens  # noqa: E402


@pytest.fixture(scope="session")
def queens4():
    return gen_queens(4)


@pytest.fixture(scope="session")
def queens8():
    return gen_queens(8)


@pytest.fixture(scope="session")
def bibd7():
    return gen_bibd(7, 7, 3, 3, 1)


@pytest.fixture(scope="session")
def golomb4():
    return gen_golomb(4, 10)


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import RESULTS, lines

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in lines():
        terminalreporter.write_line(line)
