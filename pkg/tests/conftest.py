from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
STUDIES = ROOT / "studies"

_CRITERIA: list[tuple[str, bool, str]] = []


@pytest.fixture
def studies_dir():
    return STUDIES


@pytest.fixture
def record_criterion():
    """Log one acceptance criterion; the summary is printed after the run."""

    def record(name: str, ok: bool, detail: str = ""):
        _CRITERIA.append((name, ok, detail))

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _CRITERIA:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
