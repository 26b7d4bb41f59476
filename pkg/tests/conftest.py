import pytest

# filled in by test_acceptance.py, printed once at the end of the session
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])


@pytest.fixture
def acceptance_line():
    def record(number, ok, seconds, budget, detail):
        status = "PASS" if ok and seconds <= budget else "FAIL"
        line = f"criterion {number}: {status}  {seconds:7.1f}s (budget {budget:.0f}s)  {detail}"
        ACCEPTANCE[number] = line
        return line

    return record
