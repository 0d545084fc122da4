import pytest
from mpmath import mp

from qeverify import forms

CRITERION_LINES = []


@pytest.fixture(autouse=True)
def _precision():
    old = mp.prec
    mp.prec = 128
    yield
    mp.prec = old


@pytest.fixture(scope="session")
def fixture_forms():
    return forms.ingest_forms(forms.FIXTURE_PATH)


@pytest.fixture(scope="session")
def first_maass(fixture_forms):
    return forms.first_maass(fixture_forms)


@pytest.fixture(scope="session")
def delta():
    return forms.delta_form(2000)


@pytest.fixture
def record_criterion():
    """Collects one PASS/FAIL line per acceptance criterion for the terminal summary."""
    def record(line):
        CRITERION_LINES.append(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in CRITERION_LINES:
            terminalreporter.write_line(line)
