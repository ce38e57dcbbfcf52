from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from citeimpact import fixtures  # noqa: E402


@pytest.fixture(scope="session")
def fig1():
    g, _ = fixtures.load("fig1")
    return g


@pytest.fixture(scope="session")
def fig2():
    g, _ = fixtures.load("fig2")
    return g


@pytest.fixture(scope="session")
def fig12():
    g, _ = fixtures.load("fig12", with_meta=True)
    return g


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line for an acceptance criterion."""

    def record(label: str, ok: bool, detail: str = "") -> bool:
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  [{detail}]" if detail else ""))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
