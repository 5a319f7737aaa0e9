import time

import pytest

_LINES = []


class Criterion:
    """Run one acceptance criterion and record a PASS/FAIL line for it."""

    def __init__(self, number, title, budget=None):
        self.number = number
        self.title = title
        self.budget = budget

    def run(self, body):
        t0 = time.perf_counter()
        try:
            ok, detail = body()
        except Exception as exc:
            self._record(False, f"error: {exc!r}", time.perf_counter() - t0)
            raise
        elapsed = time.perf_counter() - t0
        if self.budget is not None and elapsed > self.budget:
            ok = False
            detail += f"; over the {self.budget}s budget"
        self._record(ok, detail, elapsed)
        assert ok, detail

    def _record(self, ok, detail, elapsed):
        tag = "PASS" if ok else "FAIL"
        line = f"[{tag}] criterion {self.number:2d}: {self.title} ({detail}; {elapsed:.1f}s)"
        _LINES.append((self.number, line))
        print(line)


@pytest.fixture
def criterion():
    return Criterion


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_LINES):
            terminalreporter.write_line(line)
