import numpy as np
import pytest

from domdisc import Veronese

# one line per acceptance criterion, filled in by test_acceptance and printed at the end
ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture(scope="session")
def V():
    return Veronese()


@pytest.fixture
def rng():
    return np.random.default_rng(0)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
