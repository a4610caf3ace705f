import pytest

_VERDICTS = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_VERDICTS] = {}


@pytest.fixture
def verdict(request):
    """Record one acceptance line: ``verdict("3", passed, "detail")``."""
    table = request.config.stash[_VERDICTS]

    def record(criterion, passed, detail=""):
        table[criterion] = (bool(passed), detail)
        return bool(passed)

    return record


def pytest_terminal_summary(terminalreporter, config):
    table = config.stash.get(_VERDICTS, {})
    if not table:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(table, key=lambda c: (int("".join(filter(str.isdigit, c))), c)):
        passed, detail = table[criterion]
        terminalreporter.write_line(f"criterion {criterion:<3} {'PASS' if passed else 'FAIL'}  {detail}")
