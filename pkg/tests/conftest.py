import time

import pytest

ACCEPTANCE = []


class Criterion:
    def __init__(self):
        self.label = None
        self.limit = None
        self.t0 = None
        self.elapsed = None

    def start(self, label: str, limit: float) -> None:
        self.label, self.limit, self.t0 = label, limit, time.perf_counter()

    def stop(self) -> float:
        self.elapsed = time.perf_counter() - self.t0
        assert self.elapsed < self.limit, f"{self.label}: {self.elapsed:.2f}s exceeds {self.limit}s"
        return self.elapsed


@pytest.fixture
def criterion(request):
    """Times one acceptance criterion and prints a PASS/FAIL line for it."""
    c = Criterion()
    yield c
    if c.label is None:
        return
    call = getattr(request.node, "rep_call", None)
    ok = call is not None and call.passed
    took = c.elapsed if c.elapsed is not None else time.perf_counter() - c.t0
    line = f"{'PASS' if ok else 'FAIL'}  {c.label}  ({took:.2f}s, limit {c.limit:g}s)"
    ACCEPTANCE.append(line)
    print("\n" + line)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    setattr(item, "rep_" + rep.when, rep)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
