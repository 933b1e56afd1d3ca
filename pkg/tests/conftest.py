import pytest

from rmtorsion.numberfield import real_quadratic_field
from rmtorsion.verify import shipped_field


@pytest.fixture(scope="session")
def Q5():
    return real_quadratic_field(5)


@pytest.fixture(scope="session")
def Q2():
    return real_quadratic_field(2)


@pytest.fixture(scope="session")
def Q3():
    return real_quadratic_field(3)


@pytest.fixture(scope="session")
def cubic():
    return shipped_field("cubic81")


@pytest.fixture(scope="session")
def quadratic_fields():
    return {d: real_quadratic_field(d) for d in (2, 3, 5, 7, 13)}


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
