import random

import pytest

from contractkit import platoon

# filled by test_acceptance.py, printed after the run
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])


@pytest.fixture
def rng():
    return random.Random(20240519)


@pytest.fixture(scope="session")
def vehicles():
    """The vehicle-following systems with h = 1, k = 1/4, c = 1/2."""

    class Data:
        A = platoon.assumptions()
        G = platoon.guarantees()
        Sigma = platoon.follower()
        Sigma_c = platoon.constrained_follower()
        lead = platoon.lead_vehicle()
        contract = platoon.spacing_contract()
        Hg = platoon.spacing_row()

    return Data
