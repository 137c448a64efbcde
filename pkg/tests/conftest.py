import pytest

ACCEPTANCE = []


class Reporter:
    def __call__(self, number: int, name: str, ok: bool, detail: str = "") -> bool:
        ACCEPTANCE.append((number, name, bool(ok), detail))
        return ok


@pytest.fixture
def report():
    return Reporter()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, ok, detail in sorted(ACCEPTANCE, key=lambda r: r[0]):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{status}] {number:2d} {name}: {detail}")
