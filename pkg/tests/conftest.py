import pytest

_outcomes: dict[int, tuple[str, list[str]]] = {}


def pytest_runtest_logreport(report):
    num = getattr(report, "criterion", None)
    if num is None:
        return
    title, failed = _outcomes.setdefault(num[0], (num[1], []))
    if report.failed:
        failed.append(report.nodeid)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = (marker.args[0], marker.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_outcomes):
        title, failed = _outcomes[num]
        status = "FAIL" if failed else "PASS"
        terminalreporter.write_line(f"[{status}] criterion {num:>2}: {title}")
