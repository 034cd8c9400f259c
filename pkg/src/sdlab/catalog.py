"""Reference designs used as worked examples throughout the tests and docs."""
from __future__ import annotations

from .matrix import ModularityMatrix, build_matrix

GEOMETRIC_SHAPES_GRID = [
    [1, 0, 0, 0, 0],
    [0, 1, 0, 0, 0],
    [1, 1, 1, 0, 0],
    [0, 0, 0, 1, 0],
    [0, 0, 0, 1, 1],
]

# a distributed-systems design: 10 functionals, 10 structors
NEESGRID_GRID = [
    [1, 1, 0, 1, 0, 0, 0, 0, 0, 0],
    [0, 1, 1, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 1, 0, 1, 1, 0, 0, 0],
    [0, 0, 0, 0, 1, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 1, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
]

NEESGRID_FUNCTIONALS = [
    "CollData", "MngData", "DataView", "OtherCol", "SynCol",
    "AsynCol", "HPC", "SimCodes", "HybExp", "SercData",
]
NEESGRID_STRUCTORS = [
    "Data Str", "Data Rp", "Data Vu", "Data Ac", "Tele pre",
    "Chef", "Grif Infr", "Sim Rep", "Hyb Exp", "Data Dis",
]

# hand-picked reference modules: two 3x3 and four 1x1 (0-based)
NEESGRID_REFERENCE_BLOCKS = [
    ([0, 1, 2], [0, 1, 2]),
    ([3, 4, 5], [3, 4, 5]),
    ([6], [6]),
    ([7], [7]),
    ([8], [8]),
    ([9], [9]),
]

OBSERVER_FUNCTIONALS = [
    "Maintain list", "Notify observers", "Maintain global-state", "Maintain local-state",
    "Update observers", "Display analog", "Display digital", "Construct objects",
]
OBSERVER_STRUCTORS = [
    "subject", "Concrete subject", "Subject resource", "Concrete observer",
    "Observer", "GUI analog", "GUI digit", "Init",
]


def geometric_shapes(symbolic: bool = True) -> ModularityMatrix:
    """5x5 standard matrix: shapes module (3x3) and GUI module (2x2)."""
    if symbolic:
        rows = [f"F{i}" for i in range(1, 6)]
        cols = [f"S{i}" for i in range(1, 6)]
    else:
        rows = ["Calculate-Circle-Functions", "Calculate-Triangle-Functions",
                "Translate-Shape", "Display", "Refresh"]
        cols = ["Circle", "Triangle", "Shape", "GUI", "Refresh Aspect"]
    return build_matrix("Geometric Shapes", rows, cols, GEOMETRIC_SHAPES_GRID)


def neesgrid(symbolic: bool = True) -> ModularityMatrix:
    """10x10 bordered matrix of the NEESgrid system."""
    if symbolic:
        rows = [f"F{i}" for i in range(1, 11)]
        cols = [f"S{i}" for i in range(1, 11)]
    else:
        rows, cols = NEESGRID_FUNCTIONALS, NEESGRID_STRUCTORS
    return build_matrix("NEESgrid", rows, cols, NEESGRID_GRID)


def observer_fragment() -> ModularityMatrix:
    """Observer-pattern fragment: only the Concrete observer / Observer links are known.

    Rows F1..F8 and columns S1..S8; the known entries are S4 providing
    F4 and F5, and S5 providing F5.
    """
    grid = [[0] * 8 for _ in range(8)]
    grid[3][3] = 1
    grid[4][3] = 1
    grid[4][4] = 1
    return build_matrix(
        "Observer fragment",
        [f"F{i}" for i in range(1, 9)],
        [f"S{i}" for i in range(1, 9)],
        grid,
    )
