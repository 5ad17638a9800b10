import pytest

from jostlab.scattering import PotentialSpec
from jostlab.spectrum import KWindow, search_window

REP = PotentialSpec(5.0, 1.0, "repulsive")
ATT = PotentialSpec(5.0, 1.0, "attractive")
FIG_WINDOW = KWindow(-3.0, 3.0, -5.0, 5.0)


@pytest.fixture(scope="session")
def rep():
    return REP


@pytest.fixture(scope="session")
def att():
    return ATT


@pytest.fixture(scope="session")
def fig1_spectrum():
    return search_window(REP, FIG_WINDOW)


@pytest.fixture(scope="session")
def fig2_spectrum():
    return search_window(ATT, FIG_WINDOW)


# acceptance verdicts, printed once at the end of the run
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
