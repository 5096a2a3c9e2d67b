import pytest

_lines = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record one ``ACCEPTANCE <n> PASS|FAIL`` line and fail the test if not ok."""
    lines = request.config.stash.setdefault(_lines, [])

    def check(number, ok, detail):
        line = f"ACCEPTANCE {number:>2} {'PASS' if ok else 'FAIL'}: {detail}"
        lines.append(line)
        print(line)
        assert ok, line

    return check


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_lines, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
