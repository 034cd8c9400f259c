import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from sdlab.catalog import geometric_shapes, neesgrid  # noqa: E402
from sdlab.matrix import build_matrix  # noqa: E402

DATA = Path(__file__).resolve().parents[1] / "data"
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def gs():
    return geometric_shapes()


@pytest.fixture
def ng():
    return neesgrid()


@st.composite
def grids(draw, max_rows=6, max_cols=6, min_rows=1, min_cols=1):
    n = draw(st.integers(min_rows, max_rows))
    m = draw(st.integers(min_cols, max_cols))
    return [draw(st.lists(st.integers(0, 1), min_size=m, max_size=m)) for _ in range(n)]


@st.composite
def admissible_grids(draw, max_rows=6, max_cols=6):
    """Binary grids with no empty row or column (a spine guarantees it)."""
    g = draw(grids(max_rows, max_cols))
    n, m = len(g), len(g[0])
    for k in range(max(n, m)):
        g[k % n][k % m] = 1
    return g


def as_matrix(grid, name="m"):
    return build_matrix(name, [f"F{i + 1}" for i in range(len(grid))],
                        [f"S{j + 1}" for j in range(len(grid[0]))], grid)


_ACCEPTANCE: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py::test_ac" in report.nodeid:
        _ACCEPTANCE.append((report.nodeid.split("::")[-1], "PASS" if report.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for name, status in _ACCEPTANCE:
            terminalreporter.write_line(f"{status}  {name}")
