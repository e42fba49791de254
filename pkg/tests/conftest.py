import re

import pytest

_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)", report.nodeid)
    if not m:
        return
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    n = int(m.group(1))
    status = "PASS" if report.passed else "FAIL"
    if n in _CRITERIA:
        old, title = _CRITERIA[n]
        _CRITERIA[n] = ("FAIL" if "FAIL" in (old, status) else "PASS", title)
    else:
        _CRITERIA[n] = (status, getattr(report, "criterion_title", ""))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    doc = (item.function.__doc__ or "").strip().splitlines()
    rep.criterion_title = doc[0] if doc else item.name


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        status, title = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {status}  {title}")
