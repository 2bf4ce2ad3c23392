import re

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_CRITERION = re.compile(r"test_criterion_(\d+)_")
_results: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    n = int(m.group(1))
    if report.when == "call" or report.outcome != "passed":
        prev = _results.get(n, ("PASS", ""))[0]
        status = "PASS" if report.passed and prev == "PASS" else "FAIL"
        if report.skipped:
            status = "SKIP"
        _results[n] = (status, report.nodeid.split("::")[-1])


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_results):
        status, name = _results[n]
        terminalreporter.write_line(f"criterion {n:2d}: {status}  ({name})")


@pytest.fixture
def cli_dir(tmp_path):
    return tmp_path
