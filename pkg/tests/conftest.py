import json
from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"

_results: dict[int, dict] = {}


@pytest.fixture(scope="session")
def frieze_tables():
    """The two reference tables as staggered grids (None marks an empty cell)."""
    first, second = json.loads((DATA / "frieze_tables.json").read_text())
    return first, second


@pytest.fixture(scope="session")
def period_table():
    raw = json.loads((DATA / "period_table.json").read_text())
    return {int(q): tuple(ps) for q, ps in raw.items()}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    entry = _results.setdefault(number, {"title": title, "passed": 0, "failed": []})
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        if report.passed:
            entry["passed"] += 1
        elif report.failed or report.skipped:
            entry["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_results):
        e = _results[number]
        status = "FAIL" if e["failed"] else "PASS"
        line = f"criterion {number:2d} [{status}] {e['title']} ({e['passed']} passed, {len(e['failed'])} failed)"
        tr.write_line(line)
        for name in e["failed"]:
            tr.write_line(f"    failing: {name}")
