import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion; printed in the summary."""

    def record(number: int, title: str, ok: bool, detail: str) -> bool:
        tag = "PASS" if ok else "FAIL"
        _ACCEPTANCE_LINES.append((number, f"[{tag}] criterion {number:>2}: {title} -- {detail}"))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_ACCEPTANCE_LINES, key=lambda t: t[0]):
        terminalreporter.write_line(line)
