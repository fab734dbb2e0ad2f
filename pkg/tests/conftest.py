import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

_CRITERIA: dict = {}


class CriterionRecorder:
    def __init__(self, number: int, title: str):
        self.number = number
        self.title = title
        self.detail = ""

    def note(self, detail: str):
        self.detail = detail


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion; the terminal summary prints a line per criterion."""
    holder = {}

    def make(number: int, title: str) -> CriterionRecorder:
        rec = CriterionRecorder(number, title)
        holder["rec"] = rec
        return rec

    yield make
    rec = holder.get("rec")
    if rec is not None:
        failed = getattr(request.node, "_ftor_failed", True)
        _CRITERIA[rec.number] = (rec.title, not failed, rec.detail)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item._ftor_failed = rep.failed


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, ok, detail = _CRITERIA[n]
        line = f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {title}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
