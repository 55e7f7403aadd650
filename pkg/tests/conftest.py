from __future__ import annotations

import pytest

_CRITERIA: dict[int, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and rep.passed:
        return
    n = mark.args[0]
    entry = _CRITERIA.setdefault(n, [True, 0.0, []])
    entry[0] = entry[0] and not rep.failed
    entry[1] += rep.duration
    if rep.when == "call":
        entry[2].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        ok, secs, names = _CRITERIA[n]
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {n:2d}: {status}  ({len(names)} tests, {secs:.1f}s)")
