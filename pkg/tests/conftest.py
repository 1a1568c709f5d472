"""Collects one verdict line per acceptance criterion and prints them at the end of the run."""

from dataclasses import dataclass, field

import pytest


@dataclass
class Criterion:
    title: str
    parts: list = field(default_factory=list)
    crashed: str = ""

    @property
    def passed(self):
        return bool(self.parts) and not self.crashed and all(ok for _, ok, _ in self.parts)


REPORT: dict = {}


class Recorder:
    def __init__(self, number, title):
        self.entry = REPORT.setdefault(number, Criterion(title))

    def check(self, label, ok, detail):
        """Record one sub-check; the test asserts after every part is recorded."""
        self.entry.parts.append((label, bool(ok), detail))
        return bool(ok)


@pytest.fixture
def criterion(request):
    number, title = request.node.get_closest_marker("criterion").args
    return Recorder(number, title)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker and report.when == "call" and report.failed and call.excinfo is not None \
            and not call.excinfo.errisinstance(AssertionError):
        number, title = marker.args
        REPORT.setdefault(number, Criterion(title)).crashed = call.excinfo.exconly()


def pytest_terminal_summary(terminalreporter):
    if not REPORT:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(REPORT):
        entry = REPORT[number]
        tr.write_line(f"criterion {number} {'PASS' if entry.passed else 'FAIL'}: {entry.title}")
        for label, ok, detail in entry.parts:
            tr.write_line(f"    {'ok ' if ok else 'BAD'} {label}: {detail}")
        if entry.crashed:
            tr.write_line(f"    BAD error: {entry.crashed}")
