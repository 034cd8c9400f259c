import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import DATA, as_matrix, grids
from sdlab.catalog import NEESGRID_REFERENCE_BLOCKS, geometric_shapes, neesgrid
from sdlab.formats import (
    ParseError,
    matrix_from_dict,
    matrix_to_dict,
    node_from_dict,
    node_to_dict,
    parse_csv,
    parse_partition,
    parse_sdl,
    partition_to_dict,
    read_matrix,
    to_csv,
    to_sdl,
)
from sdlab.lab import GeneratorSpec, generate_system
from sdlab.structure import collapse_block, expand_block, make_partition


def test_data_files_match_catalog():
    assert parse_csv((DATA / "gs.csv").read_text(), "gs").entries == geometric_shapes().entries
    assert parse_csv((DATA / "ng.csv").read_text(), "ng").entries == neesgrid().entries
    sdl = parse_sdl((DATA / "gs.sdl").read_text())
    assert sdl == geometric_shapes(False)


def test_named_csv_keeps_labels():
    m = parse_csv((DATA / "ng_named.csv").read_text(), "NEESgrid")
    assert m == neesgrid(False)


@pytest.mark.parametrize("m", [geometric_shapes(), neesgrid(), geometric_shapes(False)])
def test_csv_round_trip(m):
    assert parse_csv(to_csv(m), m.name) == m


def test_csv_round_trip_generated():
    for seed in range(100):
        m = generate_system(GeneratorSpec(seed, ((3, 2, 0.5), (2, 3, 0.4)), seed % 3))
        assert parse_csv(to_csv(m), m.name) == m


@settings(max_examples=100, deadline=None)
@given(grids(8, 8))
def test_csv_round_trip_property(grid):
    m = as_matrix(grid)
    assert parse_csv(to_csv(m), "m") == m


@pytest.mark.parametrize("text,line,col,fragment", [
    (",S1,S2\nF1,1,0\nF2,0,2\n", 3, 3, "non-binary"),
    (",S1,S2\nF1,1,0\nF2,0\n", 3, None, "expected 3 fields"),
    (",S1\n", 1, None, "no functional rows"),
    ("X,S1\nF1,1\n", 1, 1, "first header cell"),
])
def test_csv_errors(text, line, col, fragment):
    with pytest.raises(ParseError, match=fragment) as info:
        parse_csv(text)
    assert (info.value.line, info.value.column) == (line, col)


def test_csv_duplicate_label():
    with pytest.raises(ParseError, match="duplicate"):
        parse_csv(",S1\nF1,1\nF1,1\n")


def test_sdl_basic_and_comments():
    text = """# a design
system Tiny
structor A provides f, g   # trailing comment
structor B provides g
"""
    m = parse_sdl(text)
    assert m.name == "Tiny"
    assert m.functional_names == ("f", "g")
    assert m.entries == ((1, 0), (1, 1))


@pytest.mark.parametrize("text,fragment,line", [
    ("system X\nfunctionals: f\nstructor A provides g\n", "unknown functional g", 3),
    ("system X\nstructor A provides\n", "empty provides", 2),
    ("system X\nstructor A provides f\nbogus line\n", "syntax error", 3),
    ("structor A provides f\n", "before system", 1),
    ("system X\n", "no structor", None),
    ("system X\nstructor A provides f\nstructor A provides f\n", "duplicate structor", 3),
])
def test_sdl_errors(text, fragment, line):
    with pytest.raises(ParseError, match=fragment) as info:
        parse_sdl(text)
    assert info.value.line == line


def test_sdl_round_trip():
    for m in (geometric_shapes(False), neesgrid(False)):
        assert parse_sdl(to_sdl(m)) == m


def test_read_matrix_sniffs():
    sdl = (DATA / "gs.sdl").read_text()
    assert read_matrix(sdl) == read_matrix(sdl, hint="x.sdl")
    assert read_matrix((DATA / "gs.csv").read_text(), "gs").shape == (5, 5)


def test_partition_json(ng):
    p = make_partition(ng, NEESGRID_REFERENCE_BLOCKS)
    text = json.dumps(partition_to_dict(ng, p))
    assert parse_partition(text, ng) == p
    assert parse_partition((DATA / "ng_reference_partition.json").read_text(), ng) == p
    with pytest.raises(ParseError):
        parse_partition("{", ng)
    with pytest.raises(ParseError):
        parse_partition('{"rows": []}', ng)


def test_matrix_and_node_dicts(ng):
    assert matrix_from_dict(json.loads(json.dumps(matrix_to_dict(ng)))) == ng
    b = make_partition(ng, NEESGRID_REFERENCE_BLOCKS).blocks[1]
    collapsed, node = collapse_block(ng, b.rows, b.cols, "M")
    again = node_from_dict(json.loads(json.dumps(node_to_dict(node))))
    assert again == node
    assert expand_block(collapsed, again, "M") == ng


@settings(max_examples=50, deadline=None)
@given(st.text(st.characters(codec="utf-8", exclude_characters=",\r\n\"", exclude_categories=("Cs", "Zs", "Cc")),
               min_size=1, max_size=6))
def test_labels_survive_csv(label):
    m = as_matrix([[1]]).__class__("m", (label,), ("S1",), ((1,),))
    assert parse_csv(to_csv(m), "m").functional_names == (label.strip(),)
