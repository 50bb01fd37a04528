import sys
from pathlib import Path

import pytest

from shortdual import WindowSpec, make_window

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

DATA = HERE / "data"


def catalog(kind, N):
    return make_window(WindowSpec(kind, N=N))


@pytest.fixture
def knots_csv():
    return DATA / "counterexample_knots.csv"


@pytest.fixture
def knot_window(knots_csv):
    from shortdual.windows import load_knots
    return make_window(load_knots(knots_csv))


@pytest.fixture
def b2():
    return catalog("bspline", 2)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        terminalreporter.write_line(results[num])
