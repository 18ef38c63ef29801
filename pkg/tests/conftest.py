import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_RESULTS_KEY = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_RESULTS_KEY] = {}


@pytest.fixture
def acceptance(request):
    """Record the outcome of one acceptance criterion for the final summary."""
    results = request.config.stash[_RESULTS_KEY]

    def record(number, checks):
        ok = all(passed for _, passed, _ in checks)
        details = "; ".join(
            f"{label}: {detail}{'' if passed else ' [FAIL]'}" for label, passed, detail in checks
        )
        results[number] = (ok, details)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(_RESULTS_KEY, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        ok, details = results[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {details}")
