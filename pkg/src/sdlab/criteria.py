"""Quantitative modularity criteria computed directly from the matrix."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .matrix import MatrixError, ModularityMatrix


@dataclass(frozen=True)
class CriteriaReport:
    n_rows: int
    n_cols: int
    ones_count: int
    trace: int
    offdiag: int
    diagonality: int
    sparsity: Fraction

    @property
    def density(self) -> Fraction:
        return 1 - self.sparsity

    @property
    def sparsity_decimal(self) -> str:
        return f"{float(self.sparsity):.4f}"


def trace(matrix: ModularityMatrix) -> int:
    return sum(matrix.entries[i][i] for i in range(min(matrix.shape)))


def offdiag(matrix: ModularityMatrix) -> int:
    """Sum of |row - column| over all 1-entries (rectangular grids included)."""
    return sum(abs(i - j) for i, j in matrix.ones())


def diagonality(matrix: ModularityMatrix) -> int:
    return trace(matrix) - offdiag(matrix)


def sparsity(matrix: ModularityMatrix) -> Fraction:
    cells = matrix.n_rows * matrix.n_cols
    if cells == 0:
        raise MatrixError("sparsity of an empty matrix is undefined")
    return Fraction(cells - matrix.ones_count, cells)


def criteria(matrix: ModularityMatrix) -> CriteriaReport:
    t, o = trace(matrix), offdiag(matrix)
    return CriteriaReport(matrix.n_rows, matrix.n_cols, matrix.ones_count, t, o, t - o, sparsity(matrix))


def composition_score(matrix: ModularityMatrix, rows: Iterable[int], cols: Iterable[int]) -> int:
    """Pairs of 1-entries sharing a row or a column inside the block.

    Zero means no structor coupling inside the module.
    """
    rows, cols = sorted(set(rows)), sorted(set(cols))
    for i in rows:
        if not 0 <= i < matrix.n_rows:
            raise MatrixError(f"row index {i} out of range", row=i)
    for j in cols:
        if not 0 <= j < matrix.n_cols:
            raise MatrixError(f"column index {j} out of range", col=j)
    score = 0
    for i in rows:
        k = sum(matrix.entries[i][j] for j in cols)
        score += k * (k - 1) // 2
    for j in cols:
        k = sum(matrix.entries[i][j] for i in rows)
        score += k * (k - 1) // 2
    return score
