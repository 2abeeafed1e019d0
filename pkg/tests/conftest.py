import pytest

_VERDICTS = pytest.StashKey[list]()


class Verdicts:
    """Collects one PASS/FAIL line per acceptance criterion."""

    def __init__(self, lines: list):
        self._lines = lines

    def record(self, criterion: str, passed: bool, detail: str) -> bool:
        line = f"{'PASS' if passed else 'FAIL'}  criterion {criterion}: {detail}"
        self._lines.append(line)
        print(line)
        return passed


def pytest_configure(config):
    config.stash[_VERDICTS] = []


@pytest.fixture
def verdicts(request) -> Verdicts:
    return Verdicts(request.config.stash[_VERDICTS])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_VERDICTS, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
