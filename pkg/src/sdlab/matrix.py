"""Modularity matrices and their exact linear-algebra analyses.

Functionals are rows, structors are columns; a 1 at (j, k) means structor
k provides functional j. Everything here works on immutable values and
uses integer / rational arithmetic only.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Sequence

import numpy as np

Axis = Literal["structors", "functionals"]

ROW_AXES = ("functionals", "rows")
COL_AXES = ("structors", "columns", "cols")


class MatrixError(ValueError):
    """Raised when a matrix cannot be built or an index is invalid."""

    def __init__(self, message: str, row: int | None = None, col: int | None = None):
        super().__init__(message)
        self.row = row
        self.col = col


def _is_row_axis(axis: str) -> bool:
    if axis in ROW_AXES:
        return True
    if axis in COL_AXES:
        return False
    raise MatrixError(f"unknown axis {axis!r}")


@dataclass(frozen=True)
class ModularityMatrix:
    name: str
    functional_names: tuple[str, ...]
    structor_names: tuple[str, ...]
    entries: tuple[tuple[int, ...], ...]

    @property
    def n_rows(self) -> int:
        return len(self.functional_names)

    @property
    def n_cols(self) -> int:
        return len(self.structor_names)

    @property
    def shape(self) -> tuple[int, int]:
        return self.n_rows, self.n_cols

    @property
    def array(self) -> np.ndarray:
        """A fresh int8 copy of the grid."""
        return np.array(self.entries, dtype=np.int8).reshape(self.n_rows, self.n_cols)

    @property
    def ones_count(self) -> int:
        return sum(sum(r) for r in self.entries)

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.entries)

    def ones(self) -> list[tuple[int, int]]:
        """Positions of 1-entries in row-major order."""
        return [(i, j) for i, r in enumerate(self.entries) for j, v in enumerate(r) if v]

    def transpose(self) -> ModularityMatrix:
        return ModularityMatrix(
            self.name,
            self.structor_names,
            self.functional_names,
            tuple(zip(*self.entries)) if self.entries else (),
        )

    def permuted(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> ModularityMatrix:
        """New matrix whose i-th row is old row ``row_perm[i]`` (same for columns)."""
        return ModularityMatrix(
            self.name,
            tuple(self.functional_names[i] for i in row_perm),
            tuple(self.structor_names[j] for j in col_perm),
            tuple(tuple(self.entries[i][j] for j in col_perm) for i in row_perm),
        )

    def submatrix(self, rows: Sequence[int], cols: Sequence[int], name: str | None = None) -> ModularityMatrix:
        rows, cols = sorted(rows), sorted(cols)
        return ModularityMatrix(
            self.name if name is None else name,
            tuple(self.functional_names[i] for i in rows),
            tuple(self.structor_names[j] for j in cols),
            tuple(tuple(self.entries[i][j] for j in cols) for i in rows),
        )

    def with_entry(self, i: int, j: int, value: int) -> ModularityMatrix:
        grid = [list(r) for r in self.entries]
        grid[i][j] = value
        return build_matrix(self.name, self.functional_names, self.structor_names, grid)

    def row_index(self, label: str) -> int:
        try:
            return self.functional_names.index(label)
        except ValueError:
            raise MatrixError(f"unknown functional {label!r}") from None

    def col_index(self, label: str) -> int:
        try:
            return self.structor_names.index(label)
        except ValueError:
            raise MatrixError(f"unknown structor {label!r}") from None


def _check_labels(labels: Sequence[str], kind: str) -> tuple[str, ...]:
    seen: dict[str, int] = {}
    for i, label in enumerate(labels):
        if not isinstance(label, str) or not label.strip():
            raise MatrixError(f"empty {kind} label at position {i + 1}")
        if label != label.strip():
            raise MatrixError(f"{kind} label {label!r} has leading/trailing whitespace")
        if label in seen:
            raise MatrixError(f"duplicate {kind} label {label!r} at positions {seen[label] + 1} and {i + 1}")
        seen[label] = i
    return tuple(labels)


def build_matrix(
    name: str,
    functional_names: Sequence[str],
    structor_names: Sequence[str],
    entries: Sequence[Sequence[int]],
) -> ModularityMatrix:
    """Validate labels and grid, then return an immutable ModularityMatrix.

    Locations in error messages are 1-based ``(row, column)``.
    """
    rows = _check_labels(functional_names, "functional")
    cols = _check_labels(structor_names, "structor")
    grid = [list(r) for r in entries]
    if len(grid) != len(rows):
        raise MatrixError(f"grid has {len(grid)} rows but {len(rows)} functional labels")
    out = []
    for i, r in enumerate(grid):
        if len(r) != len(cols):
            raise MatrixError(f"row {i + 1} has {len(r)} entries but {len(cols)} structor labels", row=i)
        clean = []
        for j, v in enumerate(r):
            # bool is an int subclass; 1.0 compares equal to 1 -- both accepted
            if isinstance(v, (str, bytes)) or v not in (0, 1):
                raise MatrixError(f"non-binary entry at ({i + 1},{j + 1}): {v!r}", row=i, col=j)
            clean.append(int(v))
        out.append(tuple(clean))
    return ModularityMatrix(name, rows, cols, tuple(out))


def identity(n: int, name: str = "identity") -> ModularityMatrix:
    return build_matrix(
        name,
        [f"F{i + 1}" for i in range(n)],
        [f"S{i + 1}" for i in range(n)],
        [[int(i == j) for j in range(n)] for i in range(n)],
    )


# -- validation ---------------------------------------------------------------

@dataclass(frozen=True)
class Finding:
    severity: Literal["error", "warning"]
    code: str
    index: int  # 0-based row or column index
    label: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...]

    @property
    def is_admissible(self) -> bool:
        return not any(f.severity == "error" for f in self.findings)

    def codes(self) -> list[str]:
        return [f.code for f in self.findings]


def _duplicate_groups(vectors: Sequence[tuple[int, ...]]) -> list[list[int]]:
    groups: dict[tuple[int, ...], list[int]] = {}
    for i, v in enumerate(vectors):
        groups.setdefault(v, []).append(i)
    return [g for g in groups.values() if len(g) > 1]


def validate(matrix: ModularityMatrix) -> ValidationReport:
    findings: list[Finding] = []
    for axis, labels, vectors in (
        ("ROW", matrix.functional_names, [matrix.row(i) for i in range(matrix.n_rows)]),
        ("COL", matrix.structor_names, [matrix.col(j) for j in range(matrix.n_cols)]),
    ):
        word = "row" if axis == "ROW" else "column"
        for i, v in enumerate(vectors):
            if not any(v):
                findings.append(Finding("error", f"E_EMPTY_{axis}", i, labels[i],
                                        f"{word} {i + 1} ({labels[i]}) has no links"))
            elif all(v) and len(v) > 1:
                findings.append(Finding("warning", f"W_FULL_{axis}", i, labels[i],
                                        f"{word} {i + 1} ({labels[i]}) links everything"))
        for group in _duplicate_groups(vectors):
            if not any(vectors[group[0]]):
                continue
            first = group[0]
            for g in group[1:]:
                findings.append(Finding("warning", f"W_DUP_{axis}", g, labels[g],
                                        f"{word} {g + 1} ({labels[g]}) duplicates {word} {first + 1} ({labels[first]})"))
    return ValidationReport(tuple(findings))


# -- exact rank ---------------------------------------------------------------

def bareiss_rank(grid: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    a = [list(map(int, r)) for r in grid]
    if not a or not a[0]:
        return 0
    n_rows, n_cols = len(a), len(a[0])
    rank, prev = 0, 1
    for c in range(n_cols):
        if rank == n_rows:
            break
        pivot = next((r for r in range(rank, n_rows) if a[r][c] != 0), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        p = a[rank][c]
        for r in range(rank + 1, n_rows):
            for k in range(c + 1, n_cols):
                # exact division is guaranteed by Sylvester's identity
                a[r][k] = (p * a[r][k] - a[r][c] * a[rank][k]) // prev
            a[r][c] = 0
        prev = p
        rank += 1
    return rank


def rank(matrix: ModularityMatrix) -> int:
    return bareiss_rank(matrix.entries)


@dataclass(frozen=True)
class DependencyReport:
    axis: str
    rank: int
    pivot_indices: tuple[int, ...]
    dependencies: tuple[tuple[int, tuple[tuple[int, Fraction], ...]], ...]

    @property
    def dependent_indices(self) -> tuple[int, ...]:
        return tuple(d for d, _ in self.dependencies)


def dependency_report(matrix: ModularityMatrix, axis: Axis = "structors") -> DependencyReport:
    """Greedy pivots in index order; every other vector as a rational combination of them.

    Vector ``v`` is a pivot iff it is independent of the pivots chosen before
    it.  Coefficients come from an incrementally maintained reduced basis.
    """
    rows = _is_row_axis(axis)
    vectors = [matrix.row(i) for i in range(matrix.n_rows)] if rows else \
        [matrix.col(j) for j in range(matrix.n_cols)]
    # basis entries: (reduced vector, lead position, expression as {pivot: coef})
    basis: list[tuple[list[Fraction], int, dict[int, Fraction]]] = []
    pivots: list[int] = []
    deps = []
    for idx, v in enumerate(vectors):
        w = [Fraction(x) for x in v]
        expr: dict[int, Fraction] = {idx: Fraction(1)}
        for bvec, lead, bexpr in basis:
            f = w[lead]
            if f:
                w = [a - f * b for a, b in zip(w, bvec)]
                for p, c in bexpr.items():
                    expr[p] = expr.get(p, Fraction(0)) - f * c
        lead = next((k for k, x in enumerate(w) if x), None)
        if lead is None:
            # 0 = v - sum(...)  =>  v = -(expr without v)
            combo = tuple(sorted((p, -c) for p, c in expr.items() if p != idx and c))
            deps.append((idx, combo))
            continue
        scale = w[lead]
        w = [x / scale for x in w]
        expr = {p: c / scale for p, c in expr.items()}
        # keep basis fully reduced at the new lead so later reductions stay single-pass
        new_basis = []
        for bvec, blead, bexpr in basis:
            f = bvec[lead]
            if f:
                bvec = [a - f * b for a, b in zip(bvec, w)]
                bexpr = dict(bexpr)
                for p, c in expr.items():
                    bexpr[p] = bexpr.get(p, Fraction(0)) - f * c
            new_basis.append((bvec, blead, bexpr))
        basis = new_basis + [(w, lead, expr)]
        pivots.append(idx)
    return DependencyReport(axis, len(pivots), tuple(pivots), tuple(deps))


def is_well_composed(matrix: ModularityMatrix) -> tuple[bool, str]:
    report = validate(matrix)
    if not report.is_admissible:
        first = next(f for f in report.findings if f.severity == "error")
        return False, f"not admissible: {first.message}"
    if matrix.n_rows != matrix.n_cols:
        return False, f"not square: {matrix.n_rows} functionals vs {matrix.n_cols} structors"
    cols = dependency_report(matrix, "structors")
    if cols.dependencies:
        bad = ", ".join(str(d + 1) for d in cols.dependent_indices)
        return False, f"structors dependent: column {bad}"
    rows = dependency_report(matrix, "functionals")
    if rows.dependencies:
        bad = ", ".join(str(d + 1) for d in rows.dependent_indices)
        return False, f"functionals dependent: row {bad}"
    return True, f"well-composed: square {matrix.n_rows}x{matrix.n_cols} with rank {cols.rank}"


# -- coalescing ---------------------------------------------------------------

def _coalesce_rows(matrix: ModularityMatrix) -> ModularityMatrix:
    order: list[tuple[int, ...]] = []
    members: dict[tuple[int, ...], list[str]] = {}
    for label, r in zip(matrix.functional_names, matrix.entries):
        if r not in members:
            order.append(r)
            members[r] = []
        members[r].append(label)
    if len(order) == matrix.n_rows:
        return matrix
    return build_matrix(matrix.name, ["+".join(members[r]) for r in order], matrix.structor_names, order)


def coalesce_duplicates(matrix: ModularityMatrix, axis: str = "functionals") -> ModularityMatrix:
    """Merge identical rows and/or columns, joining labels with ``+``."""
    if axis == "both":
        return _coalesce_rows(_coalesce_rows(matrix).transpose()).transpose()
    if _is_row_axis(axis):
        return _coalesce_rows(matrix)
    return _coalesce_rows(matrix.transpose()).transpose()


# -- vector arithmetic ------------------------------------------------------

@dataclass(frozen=True)
class CountVector:
    axis: str
    labels: tuple[str, ...]
    counts: tuple[Fraction, ...]
    negative_coefficients: bool = field(default=False)

    def as_ints(self) -> tuple[int, ...]:
        return tuple(int(c) for c in self.counts)


def add_vectors(
    matrix: ModularityMatrix,
    axis: Axis,
    indices: Sequence[int],
    coefficients: Sequence[Fraction | int] | None = None,
) -> CountVector:
    """Weighted sum of selected structors (columns) or functionals (rows).

    Negative coefficients are allowed as formal intermediates; the result then
    carries ``negative_coefficients=True``.
    """
    rows = _is_row_axis(axis)
    size = matrix.n_rows if rows else matrix.n_cols
    if len(set(indices)) != len(indices):
        raise MatrixError(f"duplicate index in {list(indices)}")
    for i in indices:
        if not 0 <= i < size:
            raise MatrixError(f"index {i} out of range for {size} {axis}")
    if coefficients is None:
        coefficients = [1] * len(indices)
    if len(coefficients) != len(indices):
        raise MatrixError("coefficients and indices differ in length")
    coefs = [Fraction(c) for c in coefficients]
    length = matrix.n_cols if rows else matrix.n_rows
    total = [Fraction(0)] * length
    for i, c in zip(indices, coefs):
        vec = matrix.row(i) if rows else matrix.col(i)
        total = [t + c * x for t, x in zip(total, vec)]
    labels = matrix.structor_names if rows else matrix.functional_names
    return CountVector(axis, labels, tuple(total), any(c < 0 for c in coefs))
