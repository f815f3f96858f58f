import sys
import warnings

import pytest

from bfree.filtration import default_filtration
from bfree.specfile import load_spec


@pytest.fixture(autouse=True)
def _quiet_taut_warnings():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        yield


@pytest.fixture(scope="session")
def levels():
    """Cached filtrations of the bundled specs."""
    cache = {}

    def get(name, n):
        key = (name, n)
        if key not in cache:
            cache[key] = default_filtration(load_spec(name), n)
        return cache[key]

    return get


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(module, "RESULT_LINES", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
