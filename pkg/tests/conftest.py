import pytest

ACCEPTANCE_RESULTS = []


@pytest.fixture
def acceptance():
    """Record one acceptance-criterion verdict and assert it."""

    def record(num: int, desc: str, ok: bool, detail: str = ""):
        status = "PASS" if ok else "FAIL"
        line = f"ACCEPTANCE {num:2d} {status} - {desc}"
        if detail:
            line += f" [{detail}]"
        ACCEPTANCE_RESULTS.append((num, line))
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_RESULTS):
            terminalreporter.write_line(line)
