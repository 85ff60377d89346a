from __future__ import annotations

import pytest

_RESULTS = pytest.StashKey[dict]()
N_CRITERIA = 8


@pytest.fixture
def criterion(request):
    """record(number, ok, detail) stores one acceptance result for the end-of-run summary."""
    results = request.config.stash.setdefault(_RESULTS, {})

    def record(number: int, ok: bool, detail: str) -> None:
        results[number] = (ok, detail)
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'} {detail}")

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_RESULTS, None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in range(1, N_CRITERIA + 1):
        ok, detail = results.get(k, (False, "not run or raised before reporting"))
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'} {detail}")
