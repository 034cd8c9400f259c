"""Text formats: CSV matrices, SDL design descriptions, JSON partitions and nodes.

CSV layout::

    ,S1,S2
    F1,1,0
    F2,0,1

Labels may not contain commas; surrounding whitespace is trimmed.

SDL layout::

    system Geometric Shapes
    functionals: F1, F2          # optional, fixes row order
    structor Circle provides F1
    structor Shape provides F1, F2
"""
from __future__ import annotations

import csv
import io
import json
import re
from typing import Any

from .matrix import MatrixError, ModularityMatrix, build_matrix
from .structure import BlockPartition, HierarchyNode, partition_from_labels


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
        self.line = line
        self.column = column


def parse_csv(text: str, name: str = "matrix") -> ModularityMatrix:
    rows = [
        (lineno, [cell.strip() for cell in fields])
        for lineno, fields in enumerate(csv.reader(io.StringIO(text)), start=1)
        if any(cell.strip() for cell in fields)
    ]
    if not rows:
        raise ParseError("empty input")
    header_line, header = rows[0]
    if header[0]:
        raise ParseError("first header cell must be empty", header_line, 1)
    structors = header[1:]
    if not structors:
        raise ParseError("no structor columns", header_line)
    if len(rows) == 1:
        raise ParseError("no functional rows", header_line)
    functionals, grid = [], []
    for lineno, cells in rows[1:]:
        if len(cells) != len(header):
            raise ParseError(f"expected {len(header)} fields, found {len(cells)}", lineno)
        functionals.append(cells[0])
        line = []
        for col, cell in enumerate(cells[1:], start=2):
            if cell not in ("0", "1"):
                raise ParseError(f"non-binary cell {cell!r}", lineno, col)
            line.append(int(cell))
        grid.append(line)
    try:
        return build_matrix(name, functionals, structors, grid)
    except MatrixError as exc:
        raise ParseError(str(exc)) from exc


def to_csv(matrix: ModularityMatrix) -> str:
    for label in matrix.functional_names + matrix.structor_names:
        if "," in label or "\n" in label:
            raise MatrixError(f"label {label!r} cannot be written as CSV")
    lines = ["," + ",".join(matrix.structor_names)]
    for label, row in zip(matrix.functional_names, matrix.entries):
        lines.append(label + "," + ",".join(str(v) for v in row))
    return "\n".join(lines) + "\n"


_SYSTEM = re.compile(r"^system\s+(\S.*)$")
_FUNCTIONALS = re.compile(r"^functionals\s*:\s*(.*)$")
_STRUCTOR = re.compile(r"^structor\s+(\S.*?)\s+provides\b\s*(.*)$")


def _split_list(text: str, lineno: int) -> list[str]:
    items = [x.strip() for x in text.split(",")]
    if any(not x for x in items):
        raise ParseError("empty name in list", lineno)
    return items


def parse_sdl(text: str) -> ModularityMatrix:
    name = None
    declared: list[str] | None = None
    mentioned: list[str] = []
    structors: list[tuple[str, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if m := _SYSTEM.match(line):
            if name is not None:
                raise ParseError("duplicate system line", lineno)
            name = m.group(1).strip()
        elif m := _FUNCTIONALS.match(line):
            if declared is not None or structors:
                raise ParseError("functionals line must come once, before any structor", lineno)
            declared = _split_list(m.group(1), lineno) if m.group(1).strip() else []
            if len(set(declared)) != len(declared):
                raise ParseError("duplicate functional in functionals line", lineno)
        elif m := _STRUCTOR.match(line):
            if name is None:
                raise ParseError("structor before system line", lineno)
            sname, provided = m.group(1).strip(), m.group(2).strip()
            if not provided:
                raise ParseError(f"structor {sname} has an empty provides list", lineno)
            items = _split_list(provided, lineno)
            if len(set(items)) != len(items):
                raise ParseError(f"structor {sname} lists a functional twice", lineno)
            if any(s == sname for s, _ in structors):
                raise ParseError(f"duplicate structor {sname}", lineno)
            for f in items:
                if declared is not None and f not in declared:
                    raise ParseError(f"unknown functional {f}", lineno)
                if f not in mentioned:
                    mentioned.append(f)
            structors.append((sname, items))
        else:
            raise ParseError(f"syntax error: {line!r}", lineno)
    if name is None:
        raise ParseError("missing system line")
    if not structors:
        raise ParseError("no structor declarations")
    functionals = declared if declared is not None else mentioned
    grid = [[int(f in provided) for _, provided in structors] for f in functionals]
    try:
        return build_matrix(name, functionals, [s for s, _ in structors], grid)
    except MatrixError as exc:
        raise ParseError(str(exc)) from exc


def to_sdl(matrix: ModularityMatrix) -> str:
    lines = [f"system {matrix.name}", "functionals: " + ", ".join(matrix.functional_names)]
    for j, s in enumerate(matrix.structor_names):
        provided = [matrix.functional_names[i] for i, v in enumerate(matrix.col(j)) if v]
        if not provided:
            raise MatrixError(f"structor {s!r} provides nothing and cannot be written as SDL")
        lines.append(f"structor {s} provides " + ", ".join(provided))
    return "\n".join(lines) + "\n"


def read_matrix(text: str, name: str = "matrix", hint: str = "") -> ModularityMatrix:
    """Dispatch on file suffix, falling back to sniffing the first meaningful line."""
    if hint.endswith(".sdl"):
        return parse_sdl(text)
    if hint.endswith(".csv"):
        return parse_csv(text, name)
    first = next((ln.split("#", 1)[0].strip() for ln in text.splitlines()
                  if ln.split("#", 1)[0].strip()), "")
    return parse_sdl(text) if first.startswith("system") else parse_csv(text, name)


# -- JSON payloads ------------------------------------------------------------

def matrix_to_dict(matrix: ModularityMatrix) -> dict[str, Any]:
    return {
        "name": matrix.name,
        "functionals": list(matrix.functional_names),
        "structors": list(matrix.structor_names),
        "entries": [list(r) for r in matrix.entries],
    }


def matrix_from_dict(data: dict[str, Any]) -> ModularityMatrix:
    return build_matrix(data["name"], data["functionals"], data["structors"], data["entries"])


def partition_to_dict(matrix: ModularityMatrix, partition: BlockPartition) -> list[dict[str, list[str]]]:
    return [
        {"rows": [matrix.functional_names[i] for i in b.rows],
         "cols": [matrix.structor_names[j] for j in b.cols]}
        for b in partition.blocks
    ]


def parse_partition(text: str, matrix: ModularityMatrix) -> BlockPartition:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from exc
    if not isinstance(data, list) or not all(
        isinstance(b, dict) and isinstance(b.get("rows"), list) and isinstance(b.get("cols"), list) for b in data
    ):
        raise ParseError('partition must be a list of {"rows": [...], "cols": [...]}')
    return partition_from_labels(matrix, [(b["rows"], b["cols"]) for b in data])


def node_to_dict(node: HierarchyNode) -> dict[str, Any]:
    return {
        "matrix": matrix_to_dict(node.matrix),
        "children": {k: node_to_dict(v) for k, v in node.children.items()},
        "row_positions": list(node.row_positions),
        "col_positions": list(node.col_positions),
        "boundary_links": [list(x) for x in node.boundary_links],
    }


def node_from_dict(data: dict[str, Any]) -> HierarchyNode:
    return HierarchyNode(
        matrix_from_dict(data["matrix"]),
        {k: node_from_dict(v) for k, v in data.get("children", {}).items()},
        tuple(data.get("row_positions", ())),
        tuple(data.get("col_positions", ())),
        tuple(tuple(x) for x in data.get("boundary_links", ())),
    )
