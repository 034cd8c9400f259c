"""Command-line front end of the design laboratory.

Exit codes: 0 success, 1 validation/analysis error, 2 usage or parse error,
3 internal error. Results go to stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import lab, report
from .criteria import composition_score, criteria
from .formats import (
    ParseError,
    matrix_to_dict,
    node_from_dict,
    node_to_dict,
    parse_partition,
    read_matrix,
    to_csv,
)
from .matrix import MatrixError, ModularityMatrix, add_vectors, coalesce_duplicates, validate
from .structure import (
    collapse_block,
    detect_blocks,
    diagnose_outliers,
    expand_block,
    reorder,
    suggest_partitions,
)

EXIT_OK, EXIT_ANALYSIS, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _load(path: str | None) -> ModularityMatrix:
    if not path:
        raise UsageError("--input is required")
    return read_matrix(_read_text(path), name=Path(path).stem, hint=path)


def _labels(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _emit(payload, args, matrix=None, partition=None) -> None:
    sys.stdout.write(report.render_report(payload, args.format, matrix, partition).body)


def _emit_matrix(matrix: ModularityMatrix, args) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(matrix_to_dict(matrix), indent=2) + "\n")
    else:
        sys.stdout.write(to_csv(matrix))


def _partition_arg(args, matrix):
    if getattr(args, "partition", None):
        return parse_partition(_read_text(args.partition), matrix)
    return None


def cmd_validate(args) -> int:
    m = _load(args.input)
    rep = validate(m)
    _emit(report.validation_payload(m, rep), args)
    return EXIT_OK if rep.is_admissible else EXIT_ANALYSIS


def cmd_criteria(args) -> int:
    m = _load(args.input)
    payload = {"report": "criteria", "name": m.name, "criteria": report.criteria_payload(criteria(m))}
    if args.block:
        rows, _, cols = args.block.partition(":")
        r = [m.row_index(x) for x in _labels(rows)]
        c = [m.col_index(x) for x in _labels(cols)]
        payload["composition_score"] = composition_score(m, r, c)
    _emit(payload, args, m)
    return EXIT_OK


def cmd_blocks(args) -> int:
    m = _load(args.input)
    det = detect_blocks(m)
    _emit(report.detection_payload(m, det), args, m, det.partition)
    return EXIT_OK


def cmd_reorder(args) -> int:
    m = _load(args.input)
    part = _partition_arg(args, m) or detect_blocks(m).partition
    r = reorder(m, part, search_order=True)
    if args.csv:
        sys.stdout.write(to_csv(r.matrix))
        return EXIT_OK
    _emit(report.reordering_payload(m, r, criteria(m), criteria(r.matrix)), args, r.matrix, r.partition)
    return EXIT_OK


def cmd_diagnose(args) -> int:
    m = _load(args.input)
    part = _partition_arg(args, m) or detect_blocks(m).partition
    diag = diagnose_outliers(m, part)
    _emit(report.diagnosis_payload(m, diag), args, m, diag.partition)
    return EXIT_OK


def cmd_suggest(args) -> int:
    m = _load(args.input)
    _emit(report.suggestions_payload(m, suggest_partitions(m, args.max_blocks)), args)
    return EXIT_OK


def cmd_assess(args) -> int:
    m = _load(args.input)
    a = lab.assess_standard(m, _partition_arg(args, m), _fraction(args.outlier_fraction), args.max_blocks)
    _emit(report.assessment_payload(m, a), args, m, a.partition)
    return EXIT_OK


def cmd_compare(args) -> int:
    left, right = _load(args.input), _load(args.other)
    kw = {"outlier_fraction": _fraction(args.outlier_fraction), "max_blocks": args.max_blocks}
    c = lab.compare_designs(left, right, **kw)
    _emit(report.comparison_payload(left, right, c), args)
    return EXIT_OK


def cmd_collapse(args) -> int:
    m = _load(args.input)
    rows = [m.row_index(x) for x in _labels(args.rows)]
    cols = [m.col_index(x) for x in _labels(args.cols)]
    collapsed, node = collapse_block(m, rows, cols, args.label)
    if args.node_out:
        Path(args.node_out).write_text(json.dumps(node_to_dict(node), indent=2) + "\n", encoding="utf-8")
    _emit_matrix(collapsed, args)
    return EXIT_OK


def cmd_expand(args) -> int:
    m = _load(args.input)
    try:
        node = node_from_dict(json.loads(_read_text(args.node)))
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ParseError(f"bad node file {args.node}: {exc}") from exc
    _emit_matrix(expand_block(m, node, args.label), args)
    return EXIT_OK


def cmd_add(args) -> int:
    m = _load(args.input)
    labels = _labels(args.select)
    index = m.col_index if args.axis == "structors" else m.row_index
    coefs = [Fraction(x) for x in _labels(args.coefficients)] if args.coefficients else None
    vec = add_vectors(m, args.axis, [index(x) for x in labels], coefs)
    payload = {
        "report": "sum",
        "name": m.name,
        "axis": vec.axis,
        "selected": labels,
        "counts": [{"label": lab_, "count": str(c)} for lab_, c in zip(vec.labels, vec.counts)],
        "negative_coefficients": vec.negative_coefficients,
    }
    if vec.negative_coefficients:
        print("warning: negative coefficients used", file=sys.stderr)
    _emit(payload, args)
    return EXIT_OK


def cmd_coalesce(args) -> int:
    _emit_matrix(coalesce_duplicates(_load(args.input), args.axis), args)
    return EXIT_OK


def _block_specs(text: str) -> tuple[tuple[int, int, float], ...]:
    out = []
    for item in _labels(text):
        try:
            shape, _, density = item.partition(":")
            r, c = shape.lower().split("x")
            out.append((int(r), int(c), float(density) if density else 1.0))
        except ValueError as exc:
            raise UsageError(f"bad block spec {item!r}; expected ROWSxCOLS[:DENSITY]") from exc
    return tuple(out)


def cmd_gen(args) -> int:
    spec = lab.GeneratorSpec(args.seed if args.seed is not None else 0, _block_specs(args.blocks), args.outliers)
    try:
        m = lab.generate_system(spec)
    except lab.GeneratorError as exc:
        raise MatrixError(str(exc)) from exc
    _emit_matrix(m, args)
    return EXIT_OK


def cmd_trend(args) -> int:
    try:
        sizes = [int(x) for x in _labels(args.sizes)]
    except ValueError as exc:
        raise UsageError(f"bad --sizes: {args.sizes}") from exc
    try:
        points = lab.sparsity_trend(sizes, args.block_size)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    payload = {
        "report": "trend",
        "name": f"block size {args.block_size}",
        "points": [{"size": s, "sparsity": str(v), "sparsity_decimal": f"{float(v):.4f}"} for s, v in points],
    }
    _emit(payload, args)
    return EXIT_OK


def _fraction(text: str | None) -> Fraction:
    if text is None:
        return lab.DEFAULT_OUTLIER_FRACTION
    try:
        return Fraction(text)
    except ValueError as exc:
        raise UsageError(f"bad fraction {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["text", "json", "markdown"], default="text")
    common.add_argument("--input", help="matrix file (.csv or .sdl)")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--max-blocks", type=int, default=16)

    parser = _Parser(prog="sdlab", description="Software design laboratory for modularity matrices")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate, "check admissibility")
    add("criteria", cmd_criteria, "trace, offdiag, diagonality, sparsity").add_argument(
        "--block", help="ROWS:COLS label lists for a composition score, e.g. F1,F2:S1,S2")
    add("blocks", cmd_blocks, "connected blocks")
    p = add("reorder", cmd_reorder, "reorder toward the standard form")
    p.add_argument("--partition")
    p.add_argument("--csv", action="store_true", help="print only the reordered matrix")
    add("diagnose", cmd_diagnose, "list outliers of a partition").add_argument("--partition")
    add("suggest", cmd_suggest, "Pareto partitions by recursive min cut")
    p = add("assess", cmd_assess, "verdict against the standard matrix")
    p.add_argument("--partition")
    p.add_argument("--outlier-fraction")
    p = add("compare", cmd_compare, "compare two designs")
    p.add_argument("--other", required=True)
    p.add_argument("--outlier-fraction")
    p = add("collapse", cmd_collapse, "collapse a block into one element")
    p.add_argument("--rows", required=True)
    p.add_argument("--cols", required=True)
    p.add_argument("--label", required=True)
    p.add_argument("--node-out")
    p = add("expand", cmd_expand, "expand a collapsed block")
    p.add_argument("--node", required=True)
    p.add_argument("--label", required=True)
    p = add("add", cmd_add, "sum structors or functionals")
    p.add_argument("--axis", choices=["structors", "functionals"], required=True)
    p.add_argument("--select", required=True, help="comma-separated labels")
    p.add_argument("--coefficients")
    add("coalesce", cmd_coalesce, "merge identical rows/columns").add_argument(
        "--axis", choices=["functionals", "structors", "both"], default="functionals")
    p = add("gen", cmd_gen, "generate a random block system")
    p.add_argument("--blocks", required=True, help="e.g. 3x3:0.6,2x2:1")
    p.add_argument("--outliers", type=int, default=0)
    p = add("trend", cmd_trend, "sparsity versus size")
    p.add_argument("--sizes", required=True)
    p.add_argument("--block-size", type=int, default=1)
    return parser


def run_cli(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except (UsageError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MatrixError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
