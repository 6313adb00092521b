import pytest

_RESULTS = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_RESULTS] = {}


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line for an acceptance criterion.

    Usage: ``with criterion(3, "description"): ...``; the line is printed
    immediately and again in the terminal summary.
    """
    results = request.config.stash[_RESULTS]

    class _Recorder:
        def __init__(self, number, text):
            self.number, self.text, self.detail = number, text, ""

        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            status = "PASS" if exc_type is None else "FAIL"
            line = f"criterion {self.number}: {status} {self.text}" + (f" ({self.detail})" if self.detail else "")
            results[self.number] = line
            print(line)
            return False

    return _Recorder


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(_RESULTS, {})
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
