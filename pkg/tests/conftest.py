import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def write_text(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line per acceptance criterion for the terminal summary."""

    class Recorder:
        def __init__(self):
            self.label = None
            self.detail = ""

        def __call__(self, label, detail=""):
            self.label, self.detail = label, detail

    rec = Recorder()
    yield rec
    if rec.label is None:
        rec.label = request.node.name
    failed = getattr(request.node, "rep_call", None) is not None and request.node.rep_call.failed
    ACCEPTANCE_LINES.append(f"[{'FAIL' if failed else 'PASS'}] {rec.label} {rec.detail}".rstrip())


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
