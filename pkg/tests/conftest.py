import numpy as np
import pytest

_LINES = pytest.StashKey[list]()


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def criterion(request):
    """Record one acceptance verdict; the lines are repeated in the terminal summary."""
    lines = request.config.stash.setdefault(_LINES, [])

    def record(label, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {label}: {detail}"
        print(line)
        lines.append(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
