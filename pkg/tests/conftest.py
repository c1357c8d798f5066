import re
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hunter_saxton.evolution import CflParams, run  # noqa: E402
from hunter_saxton.reference import exact_solution  # noqa: E402

_CRITERIA: dict[int, list[tuple[str, str, str]]] = {}
_NAME = re.compile(r"test_criterion_(\d+)_(\w+)")


@pytest.fixture(scope="session")
def peakon():
    return exact_solution("peakon")


@pytest.fixture(scope="session")
def cusp():
    return exact_solution("cusp")


@pytest.fixture(scope="session")
def peakon_run(peakon):
    return run(peakon.initial, 0.25, CflParams(), 4.0, (0.0, 2.0, 4.0))


def pytest_runtest_logreport(report):
    m = _NAME.search(report.nodeid)
    if not m:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        note = dict(report.user_properties).get("detail", "")
        _CRITERIA.setdefault(int(m.group(1)), []).append((m.group(2), report.outcome, note))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for k in sorted(_CRITERIA):
        parts = _CRITERIA[k]
        ok = all(o == "passed" for _, o, _ in parts)
        failed = [n for n, o, _ in parts if o != "passed"]
        tail = f" (failing: {', '.join(failed)})" if failed else ""
        tr.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}{tail}")
        for name, outcome, note in parts:
            if note:
                tr.write_line(f"    {name}: {note}")
