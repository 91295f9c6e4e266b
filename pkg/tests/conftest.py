import pytest

ACCEPTANCE: list[str] = []


@pytest.fixture
def record():
    """Print and remember one PASS/FAIL line per acceptance criterion."""

    def _record(number: int, ok: bool, detail: str) -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {detail}"
        print(line)
        ACCEPTANCE.append(line)

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
