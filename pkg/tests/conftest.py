import time
from dataclasses import dataclass
from typing import Any

import pytest

from qaoa_lab.amplitude import ProblemSize
from qaoa_lab.concentration import sweep
from qaoa_lab.optimizer import OptimizerConfig, multistart_maximize

ACCEPTANCE_LINES = []


@dataclass
class Timed:
    value: Any
    seconds: float


def timed(fn, *args, **kwargs):
    start = time.perf_counter()
    value = fn(*args, **kwargs)
    return Timed(value, time.perf_counter() - start)


@pytest.fixture(scope="session")
def p1_optima():
    """Multistart optima at p=1 for n = 4..200 (default config)."""
    return timed(lambda: {n: multistart_maximize(ProblemSize(n, 1)) for n in range(4, 201)})


@pytest.fixture(scope="session")
def p1_sweep():
    return timed(sweep, 4, 101, 1, OptimizerConfig())


@pytest.fixture(scope="session")
def p2_sweep():
    return timed(sweep, 10, 61, 2, OptimizerConfig())


@pytest.fixture(scope="session")
def p5_sweep():
    return timed(sweep, 4, 17, 5, OptimizerConfig(restarts=64))


@pytest.fixture
def report():
    """Record one acceptance line; shown in the terminal summary."""

    def _report(label, ok, detail):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
        assert ok, f"{label}: {detail}"

    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
