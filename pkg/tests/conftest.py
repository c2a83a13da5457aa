import pytest

_ACCEPTANCE: list[tuple[int, str, bool, str]] = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line for an acceptance criterion."""
    def record(index: int, name: str, ok: bool, detail: str) -> bool:
        _ACCEPTANCE.append((index, name, ok, detail))
        print(f"{'PASS' if ok else 'FAIL'} [{index}/9] {name}: {detail}")
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for index, name, ok, detail in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} [{index}/9] {name}: {detail}")
