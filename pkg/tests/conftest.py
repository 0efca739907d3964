import pytest

from segrezeta.exactalg import QQ, PolyRing


@pytest.fixture
def p2():
    return PolyRing.projective([2], QQ)


@pytest.fixture
def p3():
    return PolyRing.projective([3], QQ)


@pytest.fixture
def p2p2():
    return PolyRing.projective([2, 2], QQ)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
