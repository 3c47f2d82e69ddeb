import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from aivar import corpus  # noqa: E402
from aivar.tabular import load_dataset  # noqa: E402

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, text): acceptance criterion check")
    config.addinivalue_line("markers", "slow: long-running statistical check")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when != "call":
        return
    n, text = mark.args
    ok = call.excinfo is None
    prev = _CRITERIA.get(n, (text, True))
    _CRITERIA[n] = (text, prev[1] and ok)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        text, ok = _CRITERIA[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {n:>2}. {text}")


@pytest.fixture(scope="session")
def persons():
    return load_dataset(str(corpus.FIVE_PERSONS))


@pytest.fixture(scope="session")
def candidates():
    return load_dataset(str(corpus.CANDIDATES))


@pytest.fixture(scope="session")
def fines():
    return load_dataset(str(corpus.ADMINISTRATIVE_FINES))
