import pytest

_LINES = []


@pytest.fixture
def criterion():
    """Record one acceptance line, then assert it."""

    def record(number, title, value, bound, ok):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}: {value} (bound {bound})"
        _LINES.append((number, line))
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_LINES):
        terminalreporter.write_line(line)
