import contextlib
import time

import pytest

_ACCEPTANCE = []


@pytest.fixture
def criterion():
    """Context manager that records one PASS/FAIL line per acceptance criterion."""

    @contextlib.contextmanager
    def run(name):
        start = time.perf_counter()
        try:
            yield
        except BaseException as exc:
            _ACCEPTANCE.append(("FAIL", name, time.perf_counter() - start, f"{type(exc).__name__}: {exc}"))
            raise
        _ACCEPTANCE.append(("PASS", name, time.perf_counter() - start, ""))

    return run


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for status, name, seconds, detail in _ACCEPTANCE:
        line = f"{status} {name} ({seconds:.2f}s)"
        if detail:
            line += f" -- {detail.splitlines()[0][:200]}"
        terminalreporter.write_line(line)
