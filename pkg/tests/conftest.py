"""Shared test configuration.

Acceptance checks register one PASS/FAIL line each through the
``acceptance`` fixture; the lines are repeated in the terminal summary.
"""

from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

_LINES: list[str] = []


class _Recorder:
    def __init__(self, number: int, title: str):
        self.number = number
        self.title = title
        self.details: list[str] = []

    def note(self, text: str) -> None:
        self.details.append(text)


@pytest.fixture
def acceptance(request):
    """Yield a recorder; afterwards log ``[criterion N] PASS|FAIL title | notes``."""
    marker = request.node.get_closest_marker("criterion")
    number, title = marker.args
    rec = _Recorder(number, title)
    yield rec
    call = getattr(request.node, "rep_call", None)
    ok = call is not None and call.passed
    line = f"[criterion {number:>2}] {'PASS' if ok else 'FAIL'} {title}"
    if rec.details:
        line += " | " + "; ".join(rec.details)
    _LINES.append(line)
    print("\n" + line)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES, key=lambda s: int(s.split("]")[0].split()[-1])):
            terminalreporter.write_line(line)
