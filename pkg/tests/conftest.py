import os

import pytest
from hypothesis import settings

from finmok.semantics import KripkeFrame
from finmok.syntax import parse_formula

# property tests are derandomized by default; HYPOTHESIS_PROFILE=explore draws fresh seeds
settings.register_profile("fixed", derandomize=True, deadline=None)
settings.register_profile("explore", deadline=None, max_examples=500)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "fixed"))

_acceptance: dict[str, str] = {}


def pytest_runtest_logreport(report):
    marker = getattr(report, "acceptance", None)
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        previous = _acceptance.get(marker, "PASS")
        outcome = "PASS" if report.outcome == "passed" else "FAIL"
        _acceptance[marker] = "FAIL" if "FAIL" in (previous, outcome) else "PASS"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is not None:
        report.acceptance = mark.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance.items():
        terminalreporter.write_line(f"{outcome}  {name}")


@pytest.fixture
def chain():
    return KripkeFrame(("w", "v"), 1, {1: {("w", "v")}})


@pytest.fixture
def point():
    return KripkeFrame(("w",), 1, {1: set()})


@pytest.fixture
def bf1():
    return parse_formula("(forall x. [1] P(x)) -> [1] forall x. P(x)")
