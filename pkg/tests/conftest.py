from __future__ import annotations

import pytest

from ffperiods.periods import SplitBench, Workbench

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def wb4() -> Workbench:
    """GL_2(F_4) over F_2."""
    return Workbench.build(2, 2, 1)


@pytest.fixture(scope="session")
def wb9() -> Workbench:
    """GL_2(F_9) over F_3."""
    return Workbench.build(2, 3, 1)


@pytest.fixture(scope="session")
def gl2f2() -> SplitBench:
    return SplitBench(2, 2, 1)


@pytest.fixture(scope="session")
def acceptance():
    return ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, note = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {note}")
