import numpy as np
import pytest


def unit_cloud(N, n, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((N, n))
    return X / np.linalg.norm(X, axis=1, keepdims=True)


@pytest.fixture
def victim():
    return unit_cloud(500, 16, seed=3)


_CRITERIA = []


@pytest.fixture
def report_criterion():
    """Record one PASS/FAIL line; lines are printed at the end of the run."""
    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        _CRITERIA.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_CRITERIA):
            terminalreporter.write_line(line)
