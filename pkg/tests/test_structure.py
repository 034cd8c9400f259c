import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import sdlab.structure as structure
from conftest import admissible_grids, as_matrix
from oracles import brute_best_reordering, brute_min_valid_cut
from sdlab.catalog import NEESGRID_REFERENCE_BLOCKS, neesgrid
from sdlab.criteria import diagonality
from sdlab.matrix import MatrixError
from sdlab.structure import (
    ACTIONS,
    PartitionError,
    collapse_block,
    connected_components,
    cross_block_coupling,
    detect_blocks,
    diagnose_outliers,
    expand_block,
    make_partition,
    min_valid_cut,
    partition_from_labels,
    reorder,
    shared_functional_flags,
    single_responsibility_check,
    suggest_partitions,
)
from sdlab.catalog import observer_fragment


@pytest.fixture
def ng_reference(ng):
    return make_partition(ng, NEESGRID_REFERENCE_BLOCKS)


def _blocks(partition):
    return [(list(b.rows), list(b.cols)) for b in partition.blocks]


# -- partitions and components ------------------------------------------------

def test_make_partition_validates(gs):
    with pytest.raises(PartitionError):
        make_partition(gs, [([0, 1], [0, 1])])                       # misses rows
    with pytest.raises(PartitionError):
        make_partition(gs, [([0, 1, 2], [0, 1, 2]), ([2, 3, 4], [3, 4])])  # overlap
    with pytest.raises(PartitionError):
        make_partition(gs, [([0, 1, 2, 3, 4], [0, 1, 2, 3, 4, 5])])


def test_partition_from_labels(gs):
    p = partition_from_labels(gs, [(["F1", "F2", "F3"], ["S1", "S2", "S3"]), (["F4", "F5"], ["S4", "S5"])])
    assert p.outliers == ()
    with pytest.raises(MatrixError):
        partition_from_labels(gs, [(["F9"], ["S1"])])


def test_gs_blocks(gs):
    det = detect_blocks(gs)
    assert det.partition.label_sets(gs) == {
        (frozenset({"F1", "F2", "F3"}), frozenset({"S1", "S2", "S3"})),
        (frozenset({"F4", "F5"}), frozenset({"S4", "S5"})),
    }
    assert det.partition.outliers == ()
    assert det.is_modular
    assert all(f.square and f.well_composed for f in det.flags)


def test_ng_components(ng):
    comps = connected_components(ng)
    assert sorted((len(c.rows), len(c.cols)) for c in comps) == [(1, 1), (1, 1), (1, 1), (7, 7)]
    shapes = [b.shape for b in detect_blocks(ng).partition.blocks]
    assert shapes == [(7, 7), (1, 1), (1, 1), (1, 1)]


def test_detect_requires_admissible():
    with pytest.raises(MatrixError, match="inadmissible"):
        detect_blocks(observer_fragment())


def test_components_mark_degenerate():
    comps = connected_components(observer_fragment())
    assert sum(1 for c in comps if c.degenerate) == 12


@settings(max_examples=60, deadline=None)
@given(admissible_grids(8, 8), st.randoms(use_true_random=False))
def test_detect_blocks_permutation_invariant(grid, rnd):
    m = as_matrix(grid)
    rp, cp = list(range(m.n_rows)), list(range(m.n_cols))
    rnd.shuffle(rp)
    rnd.shuffle(cp)
    shuffled = m.permuted(rp, cp)
    assert detect_blocks(shuffled).partition.label_sets(shuffled) == \
        detect_blocks(m).partition.label_sets(m)


def test_removing_outliers_leaves_reference_blocks(ng, ng_reference):
    clean = ng
    for i, j in ng_reference.outliers:
        clean = clean.with_entry(i, j, 0)
    assert detect_blocks(clean).partition.label_sets(clean) == ng_reference.label_sets(ng)


# -- reordering -------------------------------------------------------------------

def test_gs_reorder_reaches_oracle(gs):
    r = reorder(gs, detect_blocks(gs).partition)
    best = brute_best_reordering([list(x) for x in gs.entries], _blocks(detect_blocks(gs).partition))
    assert best == 2  # frozen oracle value
    assert diagonality(r.matrix) == best
    assert (r.row_perm, r.col_perm) == ((0, 2, 1, 3, 4), (0, 2, 1, 3, 4))


def test_ng_reorder(ng, ng_reference):
    det = detect_blocks(ng).partition
    assert diagonality(reorder(ng, det).matrix) == 0
    r = reorder(ng, ng_reference)
    assert diagonality(r.matrix) >= diagonality(ng)
    assert len(r.partition.outliers) == 3


def test_reorder_keeps_blocks_contiguous(ng, ng_reference):
    r = reorder(ng, ng_reference)
    start_r = start_c = 0
    for b in r.partition.blocks:
        assert b.rows == tuple(range(start_r, start_r + len(b.rows)))
        assert b.cols == tuple(range(start_c, start_c + len(b.cols)))
        start_r += len(b.rows)
        start_c += len(b.cols)


@settings(max_examples=40, deadline=None)
@given(admissible_grids(5, 5))
def test_reorder_matches_brute_force(grid):
    m = as_matrix(grid)
    part = detect_blocks(m).partition
    assert diagonality(reorder(m, part).matrix) == brute_best_reordering(grid, _blocks(part))


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 4).flatmap(lambda n: admissible_grids(n, 4)))
def test_enumeration_tier_is_exact(grid):
    m = as_matrix(grid)
    whole = make_partition(m, [(range(m.n_rows), range(m.n_cols))])
    with pytest.MonkeyPatch.context() as mp:
        mp.setattr(structure, "JOINT_LIMIT", 0)
        mp.setattr(structure, "BLOCK_LIMIT", 0)
        got = diagonality(reorder(m, whole).matrix)
    assert got == brute_best_reordering(grid)


@settings(max_examples=30, deadline=None)
@given(admissible_grids(4, 4))
def test_heuristic_tier_is_valid(grid):
    m = as_matrix(grid)
    whole = make_partition(m, [(range(m.n_rows), range(m.n_cols))])
    with pytest.MonkeyPatch.context() as mp:
        mp.setattr(structure, "JOINT_LIMIT", 0)
        mp.setattr(structure, "BLOCK_LIMIT", 0)
        mp.setattr(structure, "ENUM_LIMIT", 0)
        r = reorder(m, whole)
    assert sorted(r.row_perm) == list(range(m.n_rows))
    assert sorted(r.col_perm) == list(range(m.n_cols))
    assert diagonality(r.matrix) <= brute_best_reordering(grid)


@settings(max_examples=40, deadline=None)
@given(admissible_grids(4, 4), st.data())
def test_block_order_search_matches_brute_force(grid, data):
    m = as_matrix(grid)
    found = suggest_partitions(m)
    part = data.draw(st.sampled_from(found)).partition
    best = max(brute_best_reordering(grid, list(order)) for order in itertools.permutations(_blocks(part)))
    assert diagonality(reorder(m, part, search_order=True).matrix) == best


def test_ng_block_order_search(ng, ng_reference):
    r = reorder(ng, ng_reference, search_order=True)
    assert diagonality(r.matrix) == -1
    rnd = random.Random(1)
    for _ in range(5):
        rp, cp = list(range(10)), list(range(10))
        rnd.shuffle(rp)
        rnd.shuffle(cp)
        m = ng.permuted(rp, cp)
        labels = [([ng.functional_names[i] for i in b.rows], [ng.structor_names[j] for j in b.cols])
                  for b in ng_reference.blocks]
        assert diagonality(reorder(m, partition_from_labels(m, labels), search_order=True).matrix) == -1


def test_large_block_uses_fallback_quickly():
    rng = np.random.default_rng(7)
    grid = (rng.random((12, 12)) < 0.3).astype(int)
    np.fill_diagonal(grid, 1)
    m = as_matrix(grid.tolist())
    r = reorder(m, make_partition(m, [(range(12), range(12))]))
    assert diagonality(r.matrix) >= diagonality(m)


# -- diagnosis -------------------------------------------------------------------

def test_ng_reference_outliers(ng, ng_reference):
    diag = diagnose_outliers(ng, ng_reference)
    assert [(d.functional, d.structor) for d in diag.outlier_details] == [("F1", "S4"), ("F4", "S3"), ("F4", "S7")]
    kinds = [d.kind for d in diag.outlier_details]
    assert kinds == ["block<->block", "block<->block", "block<->singleton"]
    for d in diag.outlier_details:
        assert set(d.suggestions) <= set(ACTIONS)
    assert "merge blocks" in diag.outlier_details[0].suggestions
    assert "merge blocks" not in diag.outlier_details[2].suggestions


def test_delete_link_withheld_when_it_would_empty(gs):
    p = make_partition(gs, [([0, 1, 2, 3], [0, 1, 2, 3]), ([4], [4])])
    (d,) = diagnose_outliers(gs, p).outlier_details
    assert (d.row, d.col) == (4, 3)
    assert "delete link" in d.suggestions
    p = make_partition(gs, [([0, 1, 2, 4], [0, 1, 2, 3]), ([3], [4])])
    assert all((x.row, x.col) != (3, 3) or "delete link" not in x.suggestions
               for x in diagnose_outliers(gs, p).outlier_details)


def test_single_responsibility_ng(ng, ng_reference):
    got = {(v.axis, v.label, v.blocks) for v in single_responsibility_check(ng, ng_reference)}
    assert got == {
        ("functional", "F1", (0, 1)),
        ("functional", "F4", (0, 1, 2)),
        ("structor", "S3", (0, 1)),
        ("structor", "S4", (0, 1)),
        ("structor", "S7", (1, 2)),
    }


def test_shared_functional_flags(gs):
    flags = shared_functional_flags(gs)
    assert [(i, cols) for i, cols, _ in flags] == [(2, (0, 1, 2)), (4, (3, 4))]


def test_cross_block_coupling(gs, ng, ng_reference):
    assert not any(c.coupled for c in cross_block_coupling(gs, detect_blocks(gs).partition))
    first = cross_block_coupling(ng, ng_reference)[0]
    assert (first.first, first.second, first.coupled) == (0, 1, True)


# -- cuts and suggestions --------------------------------------------------------------

def _as_ids(side, n):
    return tuple(sorted(i if kind == "r" else n + i for kind, i in side))


def test_ng_component_min_cut(ng):
    big = connected_components(ng)[0]
    cut = min_valid_cut(ng, big.rows, big.cols)
    size, sides = brute_min_valid_cut([list(r) for r in ng.entries], big.rows, big.cols)
    assert size == cut.size == 1
    assert len(sides) == 3
    assert cut.side in {_as_ids(s, ng.n_rows) for s in sides} | \
        {tuple(v for v in cut.side + cut.other if v not in _as_ids(s, ng.n_rows)) for s in sides}


@settings(max_examples=60, deadline=None)
@given(admissible_grids(4, 4))
def test_min_cut_matches_brute_force(grid):
    m = as_matrix(grid)
    for comp in connected_components(m):
        cut = min_valid_cut(m, comp.rows, comp.cols)
        size, _ = brute_min_valid_cut(grid, comp.rows, comp.cols)
        assert (cut.size if cut else None) == size


@settings(max_examples=30, deadline=None)
@given(admissible_grids(4, 4))
def test_greedy_cut_is_valid_upper_bound(grid):
    m = as_matrix(grid)
    for comp in connected_components(m):
        size, _ = brute_min_valid_cut(grid, comp.rows, comp.cols)
        with pytest.MonkeyPatch.context() as mp:
            mp.setattr(structure, "EXHAUSTIVE_SIDE", 1)
            cut = min_valid_cut(m, comp.rows, comp.cols)
        if size is None:
            assert cut is None
        elif cut is not None:
            assert cut.size >= size


def test_gs_suggestions(gs):
    got = [(s.block_count, s.outlier_count) for s in suggest_partitions(gs)]
    assert got == [(2, 0), (3, 1), (4, 2), (5, 3)]


def test_ng_suggestions(ng):
    found = suggest_partitions(ng)
    assert [(s.block_count, s.outlier_count) for s in found] == \
        [(4, 0), (5, 1), (6, 2), (7, 3), (8, 5), (9, 6), (10, 7)]
    assert any(s.outlier_count <= 3 and s.block_count >= 6 for s in found)
    assert [s.block_count for s in suggest_partitions(ng, max_blocks=6)] == [4, 5, 6]


@settings(max_examples=40, deadline=None)
@given(admissible_grids(6, 6))
def test_suggestions_form_pareto_front(grid):
    found = suggest_partitions(as_matrix(grid))
    pairs = [(s.block_count, s.outlier_count) for s in found]
    assert pairs == sorted(pairs)
    assert all(a[1] < b[1] for a, b in zip(pairs, pairs[1:]))
    assert found[0].partition.blocks == detect_blocks(as_matrix(grid)).partition.blocks


# -- hierarchy ------------------------------------------------------------------------

@pytest.mark.parametrize("which", ["gs", "ng"])
def test_collapse_expand_every_block(which, gs, ng, ng_reference):
    m = gs if which == "gs" else ng
    parts = [detect_blocks(m).partition] + ([ng_reference] if which == "ng" else [])
    for part in parts:
        for b in part.blocks:
            collapsed, node = collapse_block(m, b.rows, b.cols, "BLOCK")
            assert collapsed.shape == (m.n_rows - len(b.rows) + 1, m.n_cols - len(b.cols) + 1)
            assert expand_block(collapsed, node, "BLOCK") == m


def test_collapse_is_or_aggregation(ng, ng_reference):
    b = ng_reference.blocks[0]
    collapsed, node = collapse_block(ng, b.rows, b.cols, "M")
    i = collapsed.row_index("M")
    # F1 links S4, so the collapsed row must too
    assert collapsed.entries[i][collapsed.col_index("S4")] == 1
    assert ("F1", "S4") in node.children["M"].boundary_links


def test_collapse_errors(gs):
    with pytest.raises(PartitionError):
        collapse_block(gs, [], [0], "X")
    with pytest.raises(PartitionError):
        collapse_block(gs, [0], [0], "F2")
    collapsed, node = collapse_block(gs, [0], [0], "X")
    with pytest.raises(PartitionError):
        expand_block(collapsed, node, "Y")


@settings(max_examples=80, deadline=None)
@given(admissible_grids(6, 6), st.data())
def test_collapse_round_trip(grid, data):
    m = as_matrix(grid)
    rows = data.draw(st.lists(st.integers(0, m.n_rows - 1), min_size=1, unique=True))
    cols = data.draw(st.lists(st.integers(0, m.n_cols - 1), min_size=1, unique=True))
    collapsed, node = collapse_block(m, rows, cols, "NEW")
    assert expand_block(collapsed, node, "NEW") == m


def test_names_survive(ng):
    named = neesgrid(False)
    assert detect_blocks(named).partition.blocks == detect_blocks(ng).partition.blocks


def test_identity_examples():
    from sdlab.matrix import identity

    eye = identity(4)
    singles = make_partition(eye, [([k], [k]) for k in range(4)])
    r = reorder(eye, singles)
    assert (r.row_perm, r.col_perm) == ((0, 1, 2, 3), (0, 1, 2, 3))
    assert diagnose_outliers(eye, singles).outlier_details == ()
    assert single_responsibility_check(eye, singles) == []
    assert shared_functional_flags(eye) == []
    found = suggest_partitions(identity(3))
    assert [(s.block_count, s.outlier_count) for s in found] == [(3, 0)]


def test_observer_shared_functional():
    assert [(i, cols) for i, cols, _ in shared_functional_flags(observer_fragment())] == [(4, (3, 4))]
