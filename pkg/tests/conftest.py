import os

from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


# --- acceptance report ----------------------------------------------------------------

import pytest

_ACCEPTANCE = pytest.StashKey[list]()


class _Recorder:
    def __init__(self, lines, label):
        self.lines, self.label, self.done = lines, label, False

    def __call__(self, passed: bool, detail: str):
        self.done = True
        self.lines.append(f"[{'PASS' if passed else 'FAIL'}] {self.label}: {detail}")
        return passed


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


@pytest.fixture
def accept(request):
    label = request.node.get_closest_marker("criterion").args[0]
    rec = _Recorder(request.config.stash[_ACCEPTANCE], label)
    yield rec
    if not rec.done:
        rec.lines.append(f"[FAIL] {label}: did not complete")


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("C", 1)[1].split(" ", 1)[0])):
            terminalreporter.write_line(line)
