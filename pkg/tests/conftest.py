import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from coupledgrp.euler import GasParams  # noqa: E402


@pytest.fixture
def gas():
    return GasParams(1.4, 277.13333)


ACCEPTANCE_LINES = []


def report(number, ok, detail):
    """Record and print the pass/fail line of an acceptance criterion."""
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
