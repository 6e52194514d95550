import pytest

ACCEPTANCE: dict[str, str] = {}


@pytest.fixture
def acceptance_results():
    return ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=int):
        terminalreporter.write_line(ACCEPTANCE[key])
