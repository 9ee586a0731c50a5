import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from primeset import PrimeCodebook  # noqa: E402


@pytest.fixture
def abc():
    return PrimeCodebook(["a", "b", "c"])


@pytest.fixture
def cb8():
    return PrimeCodebook([f"x{i}" for i in range(8)])


_criteria: dict[str, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    label = marker.args[0]
    if report.when == "call" or (report.when == "setup" and report.failed):
        status = "PASS" if report.passed else "FAIL"
        _criteria[label] = (status, item.nodeid)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_criteria, key=lambda s: int(s.split()[0][2:])):
        status, _ = _criteria[label]
        terminalreporter.write_line(f"[{status}] {label}")
