import pytest

_acceptance: dict[int, bool] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    k = marker.args[0]
    if report.when == "call":
        _acceptance[k] = report.passed
    elif report.failed:  # setup/teardown error also counts as a failure
        _acceptance[k] = False


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_acceptance):
        status = "PASS" if _acceptance[k] else "FAIL"
        terminalreporter.write_line(f"ACCEPTANCE {k} {status}")
