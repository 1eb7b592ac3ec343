from __future__ import annotations

import pytest

from sepnoether.abelian import GroupSpec
from sepnoether.blockmonoid import Context

_CRITERIA: dict[str, dict[str, list[str]]] = {}


@pytest.fixture
def c12c4() -> Context:
    G = GroupSpec((12, 4))
    return Context(G, ((1, 0), (1, 1), (0, 1)))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        slot = _CRITERIA.setdefault(str(marker.args[0]), {"passed": [], "failed": []})
        slot["passed" if rep.passed else "failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_CRITERIA, key=int):
        slot = _CRITERIA[key]
        total = len(slot["passed"]) + len(slot["failed"])
        if slot["failed"]:
            line = f"criterion {key}: FAIL  ({len(slot['failed'])}/{total} failed: {', '.join(slot['failed'])})"
        else:
            line = f"criterion {key}: PASS  ({total}/{total} passed)"
        terminalreporter.write_line(line)
