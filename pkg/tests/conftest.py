from __future__ import annotations

import pytest

_outcomes: dict[int, tuple[str, str, float]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): one numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    failed = report.failed
    if report.when == "call" or failed:
        prev = _outcomes.get(number)
        status = "FAIL" if failed or (prev and prev[0] == "FAIL") else "PASS"
        _outcomes[number] = (status, title, (prev[2] if prev else 0.0) + report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_outcomes):
        status, title, seconds = _outcomes[number]
        terminalreporter.write_line(f"{status} criterion {number}: {title} ({seconds:.1f} s)")
