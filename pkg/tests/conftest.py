import numpy as np
import pytest

_ACCEPTANCE = []


@pytest.fixture
def record():
    """Log one acceptance line; printed in the terminal summary."""
    def _record(name, passed, detail=""):
        _ACCEPTANCE.append((name, bool(passed), detail))
    return _record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)

