import warnings

import pytest

from fock_contraction.inequality import PrecisionWarning


@pytest.fixture(autouse=True)
def _precision_warnings_are_errors():
    # a silent precision loss should fail the test that caused it
    with warnings.catch_warnings():
        warnings.simplefilter("error", PrecisionWarning)
        yield


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
