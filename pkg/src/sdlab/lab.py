"""Design-laboratory workflows built on the core, criteria and structure modules."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Sequence

import numpy as np

from .criteria import CriteriaReport, criteria
from .matrix import MatrixError, ModularityMatrix, build_matrix, rank, validate
from .structure import (
    BlockPartition,
    canonical_order,
    detect_blocks,
    make_partition,
    reorder,
    suggest_partitions,
)

Verdict = Literal["standard", "bordered", "non-standard"]

DEFAULT_OUTLIER_FRACTION = Fraction(1, 5)


@dataclass(frozen=True)
class StandardAssessment:
    name: str
    is_admissible: bool
    is_square: bool
    is_full_rank: bool
    is_block_diagonal: bool
    is_modular: bool
    criteria: CriteriaReport
    verdict: Verdict
    rank: int
    partition: BlockPartition | None
    minimal_outliers: int | None
    outlier_bound: Fraction
    bordered_partition: BlockPartition | None = None
    # cheapest suggested partition at least as fine as ``partition``; reported
    # next to it so a hand-picked partition is never silently replaced
    alternative_partition: BlockPartition | None = None

    @property
    def alternative_outliers(self) -> int | None:
        return None if self.alternative_partition is None else len(self.alternative_partition.outliers)


def assess_standard(
    matrix: ModularityMatrix,
    partition: BlockPartition | None = None,
    outlier_fraction: Fraction | float = DEFAULT_OUTLIER_FRACTION,
    max_blocks: int = 16,
) -> StandardAssessment:
    """Measure a design against the square, block-diagonal standard.

    Modules are the supplied partition, or the connected components when
    none is given. Criteria are those of the best reordering toward the
    standard (block order included), so the result does not depend on the
    input's row/column order.
    """
    admissible = validate(matrix).is_admissible
    square = matrix.n_rows == matrix.n_cols
    r = rank(matrix)
    full_rank = square and r == matrix.n_rows
    bound = Fraction(outlier_fraction).limit_denominator(10**6) * matrix.ones_count
    if not admissible:
        return StandardAssessment(matrix.name, False, square, full_rank, False, False,
                                  criteria(matrix), "non-standard", r, None, None, bound)

    if partition is None:
        modules = detect_blocks(matrix).partition
    else:
        modules = make_partition(matrix, [(b.rows, b.cols) for b in partition.blocks])
    modules = make_partition(matrix, [(b.rows, b.cols) for b in canonical_order(modules.blocks)])
    all_square = all(b.is_square for b in modules.blocks)
    block_diagonal = not modules.outliers and all_square
    modular = len(modules.blocks) >= 2
    crit = criteria(reorder(matrix, modules, search_order=True).matrix)

    suggested = [s.partition for s in suggest_partitions(matrix, max_blocks)]
    if partition is not None:
        candidates = [modules] if modular else []
    else:
        candidates = [p for p in suggested if len(p.blocks) >= 2]
    minimal = min((len(p.outliers) for p in candidates), default=None)
    finer = [p for p in suggested if len(p.blocks) >= len(modules.blocks)]
    alternative = min(finer, key=lambda p: (len(p.outliers), -len(p.blocks)), default=None)

    core = admissible and square and full_rank
    bordered_by = None
    if core and block_diagonal and modular:
        verdict: Verdict = "standard"
    else:
        eligible = [p for p in candidates
                    if p.outliers and len(p.outliers) <= bound and all(b.is_square for b in p.blocks)]
        if core and eligible:
            verdict = "bordered"
            bordered_by = min(eligible, key=lambda p: (len(p.outliers), -len(p.blocks)))
        else:
            verdict = "non-standard"
    return StandardAssessment(matrix.name, admissible, square, full_rank, block_diagonal, modular,
                              crit, verdict, r, modules, minimal, bound, bordered_by, alternative)


@dataclass(frozen=True)
class DesignComparison:
    left_name: str
    right_name: str
    left: StandardAssessment
    right: StandardAssessment
    winner: Literal["left", "right", "tie"]


def comparison_key(a: StandardAssessment) -> tuple:
    """Larger is better: structure first, then criteria magnitudes."""
    outliers = -a.minimal_outliers if a.minimal_outliers is not None else -math.inf
    return (a.is_square, a.is_full_rank, outliers, a.criteria.diagonality, a.criteria.sparsity)


def compare_designs(left: ModularityMatrix, right: ModularityMatrix, **kwargs) -> DesignComparison:
    la, ra = assess_standard(left, **kwargs), assess_standard(right, **kwargs)
    kl, kr = comparison_key(la), comparison_key(ra)
    winner = "left" if kl > kr else "right" if kr > kl else "tie"
    return DesignComparison(left.name, right.name, la, ra, winner)


# -- generated systems --------------------------------------------------------

class GeneratorError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorSpec:
    seed: int
    blocks: tuple[tuple[int, int, float], ...]
    outlier_count: int = 0


def _block_spans(blocks):
    spans, r0, c0 = [], 0, 0
    for rows, cols, _ in blocks:
        spans.append((range(r0, r0 + rows), range(c0, c0 + cols)))
        r0 += rows
        c0 += cols
    return spans, r0, c0


def generate_system(spec: GeneratorSpec) -> ModularityMatrix:
    """Random block-diagonal design with injected outliers.

    Blocks are laid down first (spine, then density fill) and outliers last,
    so the same seed with ``outlier_count=0`` yields the clean system.
    """
    if not spec.blocks:
        raise GeneratorError("at least one block is required")
    for rows, cols, density in spec.blocks:
        if rows < 1 or cols < 1:
            raise GeneratorError(f"block sizes must be positive, got {rows}x{cols}")
        if not 0 <= density <= 1:
            raise GeneratorError(f"density {density} outside [0, 1]")
    if spec.outlier_count < 0:
        raise GeneratorError("outlier_count must be non-negative")
    spans, n, m = _block_spans(spec.blocks)
    rng = np.random.default_rng(spec.seed)
    grid = np.zeros((n, m), dtype=np.int8)
    owner_r = np.empty(n, dtype=np.int64)
    owner_c = np.empty(m, dtype=np.int64)
    for b, ((rows, cols, density), (rs, cs)) in enumerate(zip(spec.blocks, spans)):
        owner_r[list(rs)] = b
        owner_c[list(cs)] = b
        # spine: local diagonal, then wrap so surplus rows/columns are never empty
        for k in range(max(rows, cols)):
            grid[rs[k % rows], cs[k % cols]] = 1
        fill = rng.random((rows, cols)) < density
        grid[rs.start:rs.stop, cs.start:cs.stop] |= fill.astype(np.int8)
    off = [(i, j) for i in range(n) for j in range(m) if owner_r[i] != owner_c[j]]
    if spec.outlier_count > len(off):
        raise GeneratorError(f"{spec.outlier_count} outliers requested but only {len(off)} off-block cells")
    near = [c for c in off if abs(owner_r[c[0]] - owner_c[c[1]]) == 1]
    far = [c for c in off if abs(owner_r[c[0]] - owner_c[c[1]]) != 1]
    k_near = min(spec.outlier_count, len(near))
    chosen = [near[k] for k in rng.choice(len(near), size=k_near, replace=False)] if k_near else []
    k_far = spec.outlier_count - k_near
    if k_far:
        chosen += [far[k] for k in rng.choice(len(far), size=k_far, replace=False)]
    for i, j in chosen:
        grid[i, j] = 1
    return build_matrix(
        f"generated-{spec.seed}",
        [f"F{i + 1}" for i in range(n)],
        [f"S{j + 1}" for j in range(m)],
        grid.tolist(),
    )


def standard_matrix(size: int, block_size: int) -> ModularityMatrix:
    """Dense diagonal blocks of ``block_size`` (the last one may be smaller).

    Only ``block_size=1`` (the identity) is full rank; dense blocks repeat rows.
    """
    if size < 1 or block_size < 1:
        raise MatrixError("size and block_size must be positive")
    grid = [[int(i // block_size == j // block_size) for j in range(size)] for i in range(size)]
    return build_matrix(f"standard-{size}-{block_size}", [f"F{i + 1}" for i in range(size)],
                        [f"S{j + 1}" for j in range(size)], grid)


def sparsity_trend(sizes: Sequence[int], block_size: int = 1) -> list[tuple[int, Fraction]]:
    if list(sizes) != sorted(set(sizes)):
        raise ValueError("sizes must be strictly ascending")
    points = [(m, criteria(standard_matrix(m, block_size)).sparsity) for m in sizes]
    if any(b[1] <= a[1] for a, b in zip(points, points[1:])):
        raise ArithmeticError(f"sparsity did not increase with size: {points}")
    return points
