import pytest

_ACCEPTANCE = []


@pytest.fixture
def record():
    """Log one acceptance line: record(criterion, passed, detail)."""
    def _rec(criterion, passed, detail=""):
        _ACCEPTANCE.append((criterion, bool(passed), detail))
    return _rec


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, passed, detail in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {criterion}: {detail}")
