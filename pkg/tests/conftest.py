import os
import random
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from wsatlab import kernels  # noqa: E402
from wsatlab.graph import Graph, cycle_graph  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(params=kernels.available())
def backend(request):
    with kernels.using(request.param):
        yield request.param


@pytest.fixture
def c5() -> Graph:
    return cycle_graph(5)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20261015)


@pytest.fixture
def acceptance_report():
    def record(criterion: str, passed: bool, detail: str = "") -> None:
        line = f"[{'PASS' if passed else 'FAIL'}] {criterion}" + (f" -- {detail}" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
