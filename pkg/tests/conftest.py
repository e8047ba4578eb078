import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pfq.fpgroups import Presentation  # noqa: E402

T05599_RELATORS = ["aabbbbbaabbCC", "aaaaacccBB"]
WILKES_M = ["daDA", "dbDB", "dcDC", "aaaad", "bbbbd", "ccd", "abc"]
WILKES_N = ["daDA", "dbDB", "dcDC", "aaaaddd", "bbbbddd", "ccd", "abcd"]


@pytest.fixture
def t05599():
    return Presentation.from_letters("t05599", 3, T05599_RELATORS)


@pytest.fixture
def free2():
    return Presentation("F2", 2, ())


@pytest.fixture
def wilkes():
    return (Presentation.from_letters("M", 4, WILKES_M),
            Presentation.from_letters("N", 4, WILKES_N))


# -- acceptance summary ------------------------------------------------------

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): part of acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or not (rep.when == "call" or rep.failed or rep.skipped):
        return
    n, title = mark.args
    entry = _CRITERIA.setdefault(n, {"title": title, "parts": {}})
    if rep.when == "call" or item.nodeid not in entry["parts"]:
        entry["parts"][item.nodeid] = (rep.passed and not hasattr(rep, "wasxfail"),
                                       getattr(rep, "wasxfail", "") or
                                       (rep.longreprtext.splitlines()[-1] if rep.failed else ""))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        entry = _CRITERIA[n]
        ok = all(passed for passed, _ in entry["parts"].values())
        why = "; ".join(msg for passed, msg in entry["parts"].values() if not passed and msg)
        line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {entry['title']}"
        terminalreporter.write_line(line + (f"  [{why}]" if why else ""))
