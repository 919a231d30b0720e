"""Collects outcomes of tests marked ``@pytest.mark.criterion(n)`` and prints
one PASS/FAIL line per acceptance criterion at the end of the session."""

import pytest

_outcomes: dict[int, list] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        detail = "; ".join(str(v) for k, v in item.user_properties if k == "measured")
        _outcomes.setdefault(marker.args[0], []).append((item.name, report.passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_outcomes):
        runs = _outcomes[n]
        status = "PASS" if all(ok for _, ok, _ in runs) else "FAIL"
        details = " | ".join(f"{name}: {d}" if d else name for name, _, d in runs)
        terminalreporter.write_line(f"criterion {n:>2}: {status}  {details}")
