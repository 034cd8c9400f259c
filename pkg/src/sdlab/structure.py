"""Block structure: components, partitions, reordering, outliers and hierarchy."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components as _cc

from .matrix import MatrixError, ModularityMatrix, build_matrix, is_well_composed, validate


class PartitionError(MatrixError):
    pass


@dataclass(frozen=True)
class Block:
    rows: tuple[int, ...]
    cols: tuple[int, ...]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    @property
    def is_square(self) -> bool:
        return len(self.rows) == len(self.cols)


@dataclass(frozen=True)
class BlockPartition:
    blocks: tuple[Block, ...]
    outliers: tuple[tuple[int, int], ...]

    def row_block(self) -> dict[int, int]:
        return {i: b for b, blk in enumerate(self.blocks) for i in blk.rows}

    def col_block(self) -> dict[int, int]:
        return {j: b for b, blk in enumerate(self.blocks) for j in blk.cols}

    def label_sets(self, matrix: ModularityMatrix) -> set[tuple[frozenset[str], frozenset[str]]]:
        return {
            (frozenset(matrix.functional_names[i] for i in b.rows),
             frozenset(matrix.structor_names[j] for j in b.cols))
            for b in self.blocks
        }


def make_partition(matrix: ModularityMatrix, blocks: Iterable[tuple[Iterable[int], Iterable[int]]]) -> BlockPartition:
    """Check that blocks tile all rows and columns; derive the outlier entries."""
    out: list[Block] = []
    seen_r: set[int] = set()
    seen_c: set[int] = set()
    for rows, cols in blocks:
        rows, cols = tuple(sorted(rows)), tuple(sorted(cols))
        if not rows or not cols:
            raise PartitionError("every block needs at least one row and one column")
        for i in rows:
            if not 0 <= i < matrix.n_rows:
                raise PartitionError(f"row index {i} out of range", row=i)
            if i in seen_r:
                raise PartitionError(f"row {matrix.functional_names[i]!r} is in two blocks", row=i)
            seen_r.add(i)
        for j in cols:
            if not 0 <= j < matrix.n_cols:
                raise PartitionError(f"column index {j} out of range", col=j)
            if j in seen_c:
                raise PartitionError(f"column {matrix.structor_names[j]!r} is in two blocks", col=j)
            seen_c.add(j)
        out.append(Block(rows, cols))
    if len(seen_r) != matrix.n_rows or len(seen_c) != matrix.n_cols:
        missing = [matrix.functional_names[i] for i in range(matrix.n_rows) if i not in seen_r]
        missing += [matrix.structor_names[j] for j in range(matrix.n_cols) if j not in seen_c]
        raise PartitionError(f"partition does not cover: {', '.join(missing)}")
    rb = {i: b for b, blk in enumerate(out) for i in blk.rows}
    cb = {j: b for b, blk in enumerate(out) for j in blk.cols}
    outliers = tuple((i, j) for i, j in matrix.ones() if rb[i] != cb[j])
    return BlockPartition(tuple(out), outliers)


def partition_from_labels(matrix: ModularityMatrix, blocks: Iterable[tuple[Iterable[str], Iterable[str]]]) -> BlockPartition:
    return make_partition(matrix, [
        ([matrix.row_index(r) for r in rows], [matrix.col_index(c) for c in cols])
        for rows, cols in blocks
    ])


def _check_partition(matrix: ModularityMatrix, partition: BlockPartition) -> BlockPartition:
    return make_partition(matrix, [(b.rows, b.cols) for b in partition.blocks])


def canonical_order(blocks: Sequence[Block]) -> list[Block]:
    """Larger blocks first; equal shapes by smallest row index."""
    def key(b: Block):
        first = min(b.rows) if b.rows else math.inf
        return (-len(b.rows) * len(b.cols), -len(b.rows), -len(b.cols), first, min(b.cols, default=math.inf))
    return sorted(blocks, key=key)


# -- components ---------------------------------------------------------------

@dataclass(frozen=True)
class Component:
    rows: tuple[int, ...]
    cols: tuple[int, ...]

    @property
    def degenerate(self) -> bool:
        """A lone empty row or column."""
        return not self.rows or not self.cols


def connected_components(matrix: ModularityMatrix) -> list[Component]:
    """Components of the bipartite functional/structor graph, by smallest row index."""
    n, m = matrix.shape
    ones = matrix.ones()
    r = np.array([i for i, _ in ones], dtype=np.int64)
    c = np.array([n + j for _, j in ones], dtype=np.int64)
    graph = coo_matrix((np.ones(len(ones)), (r, c)), shape=(n + m, n + m))
    _, labels = _cc(graph, directed=False)
    groups: dict[int, tuple[list[int], list[int]]] = {}
    for v in range(n + m):
        g = groups.setdefault(int(labels[v]), ([], []))
        (g[0] if v < n else g[1]).append(v if v < n else v - n)
    comps = [Component(tuple(a), tuple(b)) for a, b in groups.values()]
    return sorted(comps, key=lambda k: (min(k.rows) if k.rows else n + min(k.cols), min(k.cols, default=m)))


@dataclass(frozen=True)
class BlockFlags:
    square: bool
    well_composed: bool


@dataclass(frozen=True)
class BlockDetection:
    partition: BlockPartition
    flags: tuple[BlockFlags, ...]

    @property
    def is_modular(self) -> bool:
        return len(self.partition.blocks) >= 2


def _require_admissible(matrix: ModularityMatrix) -> None:
    report = validate(matrix)
    if not report.is_admissible:
        first = next(f for f in report.findings if f.severity == "error")
        raise MatrixError(f"inadmissible matrix: {first.message}")


def detect_blocks(matrix: ModularityMatrix) -> BlockDetection:
    _require_admissible(matrix)
    blocks = canonical_order([Block(c.rows, c.cols) for c in connected_components(matrix)])
    partition = make_partition(matrix, [(b.rows, b.cols) for b in blocks])
    flags = tuple(
        BlockFlags(b.is_square, is_well_composed(matrix.submatrix(b.rows, b.cols))[0])
        for b in partition.blocks
    )
    return BlockDetection(partition, flags)


# -- reordering ---------------------------------------------------------------

JOINT_LIMIT = 600_000      # row-perm x col-perm pairs searched jointly
BLOCK_LIMIT = 720 * 720    # exhaustive per-block search (6x6)
ENUM_LIMIT = 40_320        # one axis enumerated, other solved by assignment (8!)


def _score(a: np.ndarray, pos_r: np.ndarray, pos_c: np.ndarray) -> int:
    i, j = np.nonzero(a)
    pr, pc = pos_r[i], pos_c[j]
    return int(np.sum(pr == pc) - np.sum(np.abs(pr - pc)))


def _perm_positions(groups: Sequence[Sequence[int]], slots: Sequence[Sequence[int]], size: int) -> np.ndarray:
    """All consistent placements as a (k, size) array of positions, lexicographic order."""
    per_group = [list(itertools.permutations(g)) for g in groups]
    combos = list(itertools.product(*per_group))
    out = np.zeros((len(combos), size), dtype=np.int64)
    for k, combo in enumerate(combos):
        for perm, sl in zip(combo, slots):
            out[k, list(perm)] = sl
    return out


def _joint_search(a, row_groups, col_groups, row_slots, col_slots):
    n, m = a.shape
    pr = _perm_positions(row_groups, row_slots, n)
    pc = _perm_positions(col_groups, col_slots, m)
    score = np.zeros((len(pr), len(pc)), dtype=np.int64)
    for i, j in zip(*np.nonzero(a)):
        d = pr[:, i, None] - pc[None, :, j]
        score += (d == 0).astype(np.int64) - np.abs(d)
    k = int(np.argmax(score))  # first maximum = lexicographically smallest pair
    return pr[k // len(pc)], pc[k % len(pc)]


def _block_exhaustive(a, pos_r, pos_c, rows, cols):
    rs, cs = sorted(pos_r[rows]), sorted(pos_c[cols])
    pr = _perm_positions([rows], [rs], a.shape[0])[:, rows]
    pc = _perm_positions([cols], [cs], a.shape[1])[:, cols]
    rset, cset = set(rows), set(cols)
    ri = {r: k for k, r in enumerate(rows)}
    ci = {c: k for k, c in enumerate(cols)}
    score = np.zeros((len(pr), len(pc)), dtype=np.int64)
    for i, j in zip(*np.nonzero(a)):
        i, j = int(i), int(j)
        if i in rset and j in cset:
            d = pr[:, ri[i], None] - pc[None, :, ci[j]]
        elif i in rset:
            d = (pr[:, ri[i]] - pos_c[j])[:, None]
        elif j in cset:
            d = (pos_r[i] - pc[:, ci[j]])[None, :]
        else:
            continue
        score = score + (d == 0).astype(np.int64) - np.abs(d)
    k = int(np.argmax(score))
    new_r, new_c = pos_r.copy(), pos_c.copy()
    new_r[rows] = pr[k // len(pc)]
    new_c[cols] = pc[k % len(pc)]
    return new_r, new_c


def _penalty(d: np.ndarray) -> np.ndarray:
    # negated diagonality contribution of a 1-entry at row-col distance d
    return np.abs(d) - (d == 0)


def _block_enumerate(a, pos_r, pos_c, rows, cols):
    """Enumerate the column order exactly; rows follow by linear assignment."""
    n, m = a.shape
    rs = np.array(sorted(pos_r[rows]))
    cs = sorted(pos_c[cols])
    others = [j for j in range(m) if j not in set(cols)]
    pc = _perm_positions([cols], [cs], m)
    pc[:, others] = pos_c[others]
    # cost[p, i, s]: row rows[i] placed at slot rs[s] under column placement p
    cost = np.einsum("im,pms->pis", a[rows].astype(np.int64), _penalty(rs[None, None, :] - pc[:, :, None]))
    other_rows = [i for i in range(n) if i not in set(rows)]
    oi, oj = np.nonzero(a[other_rows])
    rest = _penalty(pos_r[other_rows][oi][None, :] - pc[:, oj]).sum(axis=1)
    best = None
    for p in range(len(pc)):
        r_ind, s_ind = linear_sum_assignment(cost[p])
        total = int(cost[p][r_ind, s_ind].sum() + rest[p])
        if best is None or total < best[0]:
            best = (total, p, s_ind)
    _, p, s_ind = best
    new_r = pos_r.copy()
    new_r[rows] = rs[s_ind]
    return new_r, pc[p].copy()


def _block_heuristic(a, pos_r, pos_c, rows, cols, rounds: int = 8):
    """Barycenter ordering, then pairwise swaps while they strictly help."""
    cur_r, cur_c = pos_r.copy(), pos_c.copy()
    best = _score(a, cur_r, cur_c)
    rs, cs = sorted(pos_r[rows]), sorted(pos_c[cols])
    for _ in range(rounds):
        trial_r, trial_c = cur_r.copy(), cur_c.copy()
        bary = [(np.mean(trial_c[np.nonzero(a[i])[0]]) if a[i].any() else trial_r[i], i) for i in rows]
        for slot, (_, i) in zip(rs, sorted(bary)):
            trial_r[i] = slot
        bary = [(np.mean(trial_r[np.nonzero(a[:, j])[0]]) if a[:, j].any() else trial_c[j], j) for j in cols]
        for slot, (_, j) in zip(cs, sorted(bary)):
            trial_c[j] = slot
        s = _score(a, trial_r, trial_c)
        if s <= best:
            break
        best, cur_r, cur_c = s, trial_r, trial_c
    improved = True
    while improved:
        improved = False
        for members, pos, is_row in ((rows, cur_r, True), (cols, cur_c, False)):
            for x, y in itertools.combinations(members, 2):
                pos[x], pos[y] = pos[y], pos[x]
                s = _score(a, cur_r, cur_c)
                if s > best:
                    best, improved = s, True
                else:
                    pos[x], pos[y] = pos[y], pos[x]
    return cur_r, cur_c


def _optimize_block(a, pos_r, pos_c, rows, cols):
    nr, nc = math.factorial(len(rows)), math.factorial(len(cols))
    if nr * nc <= BLOCK_LIMIT:
        return _block_exhaustive(a, pos_r, pos_c, rows, cols)
    if min(nr, nc) <= ENUM_LIMIT:
        if nc <= nr:
            return _block_enumerate(a, pos_r, pos_c, rows, cols)
        new_c, new_r = _block_enumerate(a.T, pos_c, pos_r, cols, rows)
        return new_r, new_c
    return _block_heuristic(a, pos_r, pos_c, rows, cols)


@dataclass(frozen=True)
class Reordering:
    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]
    matrix: ModularityMatrix
    partition: BlockPartition  # expressed in the reordered indices


ORDER_LIMIT = 720  # block orders tried when ``search_order`` is set (6 blocks)


def _arrange(a: np.ndarray, blocks: Sequence[Block]):
    """Best positions with the blocks laid out contiguously in the given order."""
    row_groups = [list(b.rows) for b in blocks]
    col_groups = [list(b.cols) for b in blocks]
    row_slots, col_slots, r0, c0 = [], [], 0, 0
    for b in blocks:
        row_slots.append(list(range(r0, r0 + len(b.rows))))
        col_slots.append(list(range(c0, c0 + len(b.cols))))
        r0 += len(b.rows)
        c0 += len(b.cols)
    space = math.prod(math.factorial(len(g)) for g in row_groups + col_groups)
    if space <= JOINT_LIMIT:
        pos_r, pos_c = _joint_search(a, row_groups, col_groups, row_slots, col_slots)
    else:
        pos_r = np.zeros(a.shape[0], dtype=np.int64)
        pos_c = np.zeros(a.shape[1], dtype=np.int64)
        for g, sl in zip(row_groups, row_slots):
            pos_r[g] = sl
        for g, sl in zip(col_groups, col_slots):
            pos_c[g] = sl
        for _ in range(20):
            before = (pos_r.copy(), pos_c.copy())
            for rows, cols in zip(row_groups, col_groups):
                if len(rows) > 1 or len(cols) > 1:
                    pos_r, pos_c = _optimize_block(a, pos_r, pos_c, rows, cols)
            if np.array_equal(before[0], pos_r) and np.array_equal(before[1], pos_c):
                break
    return pos_r, pos_c, row_slots, col_slots


def _block_orders(partition: BlockPartition):
    blocks = partition.blocks
    rb, cb = partition.row_block(), partition.col_block()
    touched = {rb[i] for i, _ in partition.outliers} | {cb[j] for _, j in partition.outliers}
    linked = [b for k, b in enumerate(blocks) if k in touched]
    rest = [b for k, b in enumerate(blocks) if k not in touched]
    # With square blocks, every cell of a later block sits below and right of
    # every cell of an earlier one, so an outlier-free block placed between
    # others only lengthens outliers: it can go last without loss.
    if all(b.is_square for b in blocks) and math.factorial(len(linked)) <= ORDER_LIMIT:
        for head in itertools.permutations(linked):
            yield (*head, *rest)
    elif math.factorial(len(blocks)) <= ORDER_LIMIT:
        yield from itertools.permutations(blocks)
    elif math.factorial(len(linked)) <= ORDER_LIMIT:
        for head in itertools.permutations(linked):
            yield (*head, *rest)
    else:
        yield blocks


def reorder(matrix: ModularityMatrix, partition: BlockPartition, search_order: bool = False) -> Reordering:
    """Make blocks contiguous on the diagonal and maximize diagonality inside them.

    Small problems are searched exhaustively (ties: smallest row permutation,
    then smallest column permutation); larger blocks use exact column
    enumeration with assigned rows, and beyond that barycenter plus swaps.

    Blocks keep the partition's order unless ``search_order`` is set; then
    block orders are searched too, and the first best order wins. The search
    is complete when all blocks are square and at most 6 touch outliers, or
    when there are at most 6 blocks; otherwise only outlier-touching blocks
    are permuted.
    """
    partition = _check_partition(matrix, partition)
    a = matrix.array.astype(np.int64)
    orders = _block_orders(partition) if search_order else [partition.blocks]
    best = None
    for blocks in orders:
        pos_r, pos_c, row_slots, col_slots = _arrange(a, blocks)
        score = _score(a, pos_r, pos_c)
        if best is None or score > best[0]:
            best = (score, pos_r, pos_c, row_slots, col_slots)
    _, pos_r, pos_c, row_slots, col_slots = best
    row_perm = tuple(int(i) for i in np.argsort(pos_r))
    col_perm = tuple(int(j) for j in np.argsort(pos_c))
    new = matrix.permuted(row_perm, col_perm)
    new_part = make_partition(new, [(s_r, s_c) for s_r, s_c in zip(row_slots, col_slots)])
    return Reordering(row_perm, col_perm, new, new_part)


# -- outliers and diagnosis -----------------------------------------------------

ACTIONS = ("delete link", "add structor and move link", "add functional and move link", "merge blocks")


@dataclass(frozen=True)
class OutlierDetail:
    row: int
    col: int
    functional: str
    structor: str
    row_block: int
    col_block: int
    kind: str  # "block<->block" or "block<->singleton"
    suggestions: tuple[str, ...]


@dataclass(frozen=True)
class DiagnosisReport:
    partition: BlockPartition
    outlier_details: tuple[OutlierDetail, ...]

    @property
    def suggestions(self) -> tuple[tuple[str, ...], ...]:
        return tuple(d.suggestions for d in self.outlier_details)


def diagnose_outliers(matrix: ModularityMatrix, partition: BlockPartition) -> DiagnosisReport:
    partition = _check_partition(matrix, partition)
    rb, cb = partition.row_block(), partition.col_block()
    pair_count: dict[frozenset[int], int] = {}
    for i, j in partition.outliers:
        key = frozenset((rb[i], cb[j]))
        pair_count[key] = pair_count.get(key, 0) + 1
    details = []
    for i, j in partition.outliers:
        a, b = partition.blocks[rb[i]], partition.blocks[cb[j]]
        single = a.shape == (1, 1) or b.shape == (1, 1)
        acts = []
        # deleting the only link of a row or column would empty it
        if sum(matrix.row(i)) > 1 and sum(matrix.col(j)) > 1:
            acts.append(ACTIONS[0])
        acts.append(ACTIONS[1])
        acts.append(ACTIONS[2])
        if pair_count[frozenset((rb[i], cb[j]))] > 1:
            acts.append(ACTIONS[3])
        details.append(OutlierDetail(
            i, j, matrix.functional_names[i], matrix.structor_names[j], rb[i], cb[j],
            "block<->singleton" if single else "block<->block", tuple(acts),
        ))
    return DiagnosisReport(partition, tuple(details))


@dataclass(frozen=True)
class Violation:
    axis: str   # "functional" or "structor"
    index: int
    label: str
    blocks: tuple[int, ...]


def single_responsibility_check(matrix: ModularityMatrix, partition: BlockPartition) -> list[Violation]:
    """Rows/columns whose links reach into more than one block."""
    partition = _check_partition(matrix, partition)
    rb, cb = partition.row_block(), partition.col_block()
    out = []
    for i in range(matrix.n_rows):
        touched = {rb[i]} | {cb[j] for j, v in enumerate(matrix.row(i)) if v}
        if len(touched) > 1:
            out.append(Violation("functional", i, matrix.functional_names[i], tuple(sorted(touched))))
    for j in range(matrix.n_cols):
        touched = {cb[j]} | {rb[i] for i, v in enumerate(matrix.col(j)) if v}
        if len(touched) > 1:
            out.append(Violation("structor", j, matrix.structor_names[j], tuple(sorted(touched))))
    return out


def shared_functional_flags(matrix: ModularityMatrix) -> list[tuple[int, tuple[int, ...], str]]:
    """Rows provided by two or more structors: inheritance or a composite functional."""
    return [
        (i, tuple(j for j, v in enumerate(r) if v), "inheritance-or-composite")
        for i, r in enumerate(matrix.entries) if sum(r) >= 2
    ]


@dataclass(frozen=True)
class PairCoupling:
    first: int
    second: int
    structor_product: int
    functional_product: int

    @property
    def coupled(self) -> bool:
        return bool(self.structor_product or self.functional_product)


def cross_block_coupling(matrix: ModularityMatrix, partition: BlockPartition) -> list[PairCoupling]:
    """Largest inner product between full-length vectors of two different blocks."""
    partition = _check_partition(matrix, partition)
    a = matrix.array.astype(np.int64)
    col_gram = a.T @ a
    row_gram = a @ a.T
    out = []
    for (x, bx), (y, by) in itertools.combinations(enumerate(partition.blocks), 2):
        s = int(col_gram[np.ix_(bx.cols, by.cols)].max())
        f = int(row_gram[np.ix_(bx.rows, by.rows)].max())
        out.append(PairCoupling(x, y, s, f))
    return out


# -- partition search -----------------------------------------------------------

EXHAUSTIVE_SIDE = 12


@dataclass(frozen=True)
class Cut:
    size: int
    side: tuple[int, ...]   # vertex ids: rows as i, columns as n_rows + j
    other: tuple[int, ...]


def _is_connected(mask: int, adj: Sequence[int]) -> bool:
    start = mask & -mask
    seen = start
    frontier = start
    while frontier:
        v = (frontier & -frontier).bit_length() - 1
        frontier &= frontier - 1
        new = adj[v] & mask & ~seen
        seen |= new
        frontier |= new
    return seen == mask


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _local_graph(a: np.ndarray, rows: Sequence[int], cols: Sequence[int]):
    nr = len(rows)
    verts = list(rows) + [a.shape[0] + j for j in cols]
    adj = [0] * len(verts)
    for x, i in enumerate(rows):
        for y, j in enumerate(cols):
            if a[i, j]:
                adj[x] |= 1 << (nr + y)
                adj[nr + y] |= 1 << x
    return verts, adj, nr


def _exhaustive_cut(a, rows, cols) -> Cut | None:
    verts, adj, nr = _local_graph(a, rows, cols)
    v_count = len(verts)
    full = (1 << v_count) - 1
    row_mask = (1 << nr) - 1
    col_mask = full ^ row_mask
    # subsets always hold vertex 0; build cut sizes by doubling over vertices 1..V-1
    masks = np.array([1], dtype=np.int64)
    cuts = np.array([bin(adj[0]).count("1")], dtype=np.int64)
    for v in range(1, v_count):
        deg = bin(adj[v]).count("1")
        inside = np.bitwise_count(masks & adj[v]).astype(np.int64)
        masks = np.concatenate([masks, masks | (1 << v)])
        cuts = np.concatenate([cuts, cuts + deg - 2 * inside])
    comp = full ^ masks
    valid = (
        (np.bitwise_count(masks & row_mask) > 0) & (np.bitwise_count(masks & col_mask) > 0)
        & (np.bitwise_count(comp & row_mask) > 0) & (np.bitwise_count(comp & col_mask) > 0)
    )
    masks, cuts = masks[valid], cuts[valid]
    for value in np.unique(cuts):
        found = []
        for mask in masks[cuts == value].tolist():
            if _is_connected(mask, adj) and _is_connected(full ^ mask, adj):
                found.append(tuple(verts[k] for k in _bits(mask)))
        if found:
            side = min(found)
            other = tuple(v for v in verts if v not in set(side))
            return Cut(int(value), side, other)
    return None


def _greedy_cut(a, rows, cols) -> Cut | None:
    """Maximum-adjacency orderings from every start; best valid connected prefix."""
    verts, adj, nr = _local_graph(a, rows, cols)
    v_count = len(verts)
    full = (1 << v_count) - 1
    row_mask = (1 << nr) - 1
    best = None
    for start in range(v_count):
        mask = 1 << start
        weight = [0] * v_count
        for u in _bits(adj[start]):
            weight[u] += 1
        while True:
            m = mask
            comp = full ^ m
            if comp == 0:
                break
            ok = (m & row_mask and m & ~row_mask and comp & row_mask and comp & ~row_mask & full
                  and _is_connected(m, adj) and _is_connected(comp, adj))
            if ok:
                size = sum(bin(adj[v] & comp).count("1") for v in _bits(m))
                side = tuple(verts[k] for k in _bits(m))
                if verts[0] not in side:
                    side = tuple(verts[k] for k in _bits(comp))
                key = (size, side)
                if best is None or key < best:
                    best = key
            nxt = max((u for u in range(v_count) if not mask >> u & 1), key=lambda u: (weight[u], -u))
            mask |= 1 << nxt
            for u in _bits(adj[nxt]):
                weight[u] += 1
    if best is None:
        return None
    side = best[1]
    return Cut(best[0], side, tuple(v for v in verts if v not in set(side)))


def min_valid_cut(matrix: ModularityMatrix, rows: Sequence[int], cols: Sequence[int]) -> Cut | None:
    """Cheapest split of a block into two connected parts, each with a row and a column."""
    a = matrix.array
    rows, cols = sorted(rows), sorted(cols)
    if len(rows) < 2 or len(cols) < 2:
        return None
    if len(rows) <= EXHAUSTIVE_SIDE and len(cols) <= EXHAUSTIVE_SIDE:
        return _exhaustive_cut(a, rows, cols)
    return _greedy_cut(a, rows, cols)


@dataclass(frozen=True)
class Suggestion:
    partition: BlockPartition
    outlier_count: int

    @property
    def block_count(self) -> int:
        return len(self.partition.blocks)


def suggest_partitions(matrix: ModularityMatrix, max_blocks: int = 16) -> list[Suggestion]:
    """Recursive minimum cuts from the connected components; Pareto front of the chain.

    Each step splits the block whose cheapest valid cut is smallest (ties by
    vertex ids). A candidate survives unless another has at least as many
    blocks and no more outliers.
    """
    _require_admissible(matrix)
    if max_blocks < 1:
        raise ValueError("max_blocks must be positive")
    n = matrix.n_rows
    blocks = [Block(c.rows, c.cols) for c in connected_components(matrix)]
    cache: dict[Block, Cut | None] = {}
    chain = [make_partition(matrix, [(b.rows, b.cols) for b in canonical_order(blocks)])]
    while len(blocks) < max_blocks:
        best = None
        for b in blocks:
            if b not in cache:
                cache[b] = min_valid_cut(matrix, b.rows, b.cols)
            cut = cache[b]
            if cut is not None and (best is None or (cut.size, cut.side) < (best[1].size, best[1].side)):
                best = (b, cut)
        if best is None:
            break
        b, cut = best
        blocks.remove(b)
        for part in (cut.side, cut.other):
            blocks.append(Block(tuple(v for v in part if v < n), tuple(v - n for v in part if v >= n)))
        chain.append(make_partition(matrix, [(x.rows, x.cols) for x in canonical_order(blocks)]))
    found = [Suggestion(p, len(p.outliers)) for p in chain]
    return [
        s for s in found
        if not any(
            t.block_count >= s.block_count and t.outlier_count <= s.outlier_count
            and (t.block_count, t.outlier_count) != (s.block_count, s.outlier_count)
            for t in found
        )
    ]


# -- hierarchy ------------------------------------------------------------------

@dataclass(frozen=True)
class HierarchyNode:
    """One level of a collapse hierarchy.

    ``children`` maps a collapsed label to the node holding the hidden
    sub-block. A child also records where its rows and columns sat in the
    expanded matrix and which links crossed its boundary, which is what makes
    the OR-aggregation invertible.
    """
    matrix: ModularityMatrix
    children: Mapping[str, HierarchyNode] = field(default_factory=dict)
    row_positions: tuple[int, ...] = ()
    col_positions: tuple[int, ...] = ()
    boundary_links: tuple[tuple[str, str], ...] = ()


def collapse_block(
    matrix: ModularityMatrix, rows: Iterable[int], cols: Iterable[int], new_label: str,
) -> tuple[ModularityMatrix, HierarchyNode]:
    rows, cols = sorted(set(rows)), sorted(set(cols))
    if not rows or not cols:
        raise PartitionError("a collapsed block needs at least one row and one column")
    for i in rows:
        if not 0 <= i < matrix.n_rows:
            raise PartitionError(f"row index {i} out of range", row=i)
    for j in cols:
        if not 0 <= j < matrix.n_cols:
            raise PartitionError(f"column index {j} out of range", col=j)
    rset, cset = set(rows), set(cols)
    keep_r = [i for i in range(matrix.n_rows) if i not in rset]
    keep_c = [j for j in range(matrix.n_cols) if j not in cset]
    if new_label in (matrix.functional_names[i] for i in keep_r) or \
            new_label in (matrix.structor_names[j] for j in keep_c):
        raise PartitionError(f"label {new_label!r} already in use")
    # the collapsed row/column sits where the block's first row/column was
    new_rows = [i for i in range(matrix.n_rows) if i not in rset or i == rows[0]]
    new_cols = [j for j in range(matrix.n_cols) if j not in cset or j == cols[0]]
    grid = []
    for i in new_rows:
        line = []
        for j in new_cols:
            if i == rows[0] and j == cols[0]:
                line.append(1)
            elif i == rows[0]:
                line.append(int(any(matrix.entries[r][j] for r in rows)))
            elif j == cols[0]:
                line.append(int(any(matrix.entries[i][c] for c in cols)))
            else:
                line.append(matrix.entries[i][j])
        grid.append(line)
    f_names = [new_label if i == rows[0] else matrix.functional_names[i] for i in new_rows]
    s_names = [new_label if j == cols[0] else matrix.structor_names[j] for j in new_cols]
    collapsed = build_matrix(matrix.name, f_names, s_names, grid)
    boundary = tuple(
        (matrix.functional_names[i], matrix.structor_names[j])
        for i, j in matrix.ones() if (i in rset) != (j in cset)
    )
    child = HierarchyNode(matrix.submatrix(rows, cols, name=new_label), {}, tuple(rows), tuple(cols), boundary)
    return collapsed, HierarchyNode(collapsed, {new_label: child})


def expand_block(matrix: ModularityMatrix, node: HierarchyNode, label: str) -> ModularityMatrix:
    """Inverse of :func:`collapse_block` for ``label``."""
    if label not in node.children:
        raise PartitionError(f"unknown collapsed label {label!r}")
    child = node.children[label]
    sub = child.matrix
    ri, ci = matrix.row_index(label), matrix.col_index(label)
    outer_r = [k for k in range(matrix.n_rows) if k != ri]
    outer_c = [k for k in range(matrix.n_cols) if k != ci]
    n = len(outer_r) + sub.n_rows
    m = len(outer_c) + sub.n_cols
    if max(child.row_positions) >= n or max(child.col_positions) >= m:
        raise PartitionError("recorded positions do not fit this matrix")
    row_src: list[tuple[str, int]] = []
    it = iter(outer_r)
    inner = iter(range(sub.n_rows))
    for p in range(n):
        row_src.append(("in", next(inner)) if p in child.row_positions else ("out", next(it)))
    col_src: list[tuple[str, int]] = []
    it = iter(outer_c)
    inner = iter(range(sub.n_cols))
    for p in range(m):
        col_src.append(("in", next(inner)) if p in child.col_positions else ("out", next(it)))
    links = set(child.boundary_links)
    f_names = [sub.functional_names[k] if s == "in" else matrix.functional_names[k] for s, k in row_src]
    s_names = [sub.structor_names[k] if s == "in" else matrix.structor_names[k] for s, k in col_src]
    grid = []
    for (rs, rk), f in zip(row_src, f_names):
        line = []
        for (cs, ck), s in zip(col_src, s_names):
            if rs == "in" and cs == "in":
                line.append(sub.entries[rk][ck])
            elif rs == "in" or cs == "in":
                line.append(int((f, s) in links))
            else:
                line.append(matrix.entries[rk][ck])
        grid.append(line)
    return build_matrix(matrix.name, f_names, s_names, grid)
