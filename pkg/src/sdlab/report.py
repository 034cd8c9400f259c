"""Report payloads and their text / JSON / markdown renderings.

Payloads are plain JSON-compatible dicts, so ``json.loads`` of the JSON
rendering gives the payload back unchanged.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Literal

from .criteria import CriteriaReport
from .lab import DesignComparison, StandardAssessment
from .matrix import ModularityMatrix, ValidationReport
from .structure import BlockDetection, BlockPartition, DiagnosisReport, Reordering, Suggestion

Format = Literal["text", "json", "markdown"]

INSIDE_ONE, INSIDE_ZERO, OUTSIDE_ZERO, OUTLIER = "1", "0", ".", "X"


@dataclass(frozen=True)
class ReportDocument:
    format: str
    body: str


def criteria_payload(c: CriteriaReport) -> dict[str, Any]:
    return {
        "n_rows": c.n_rows,
        "n_cols": c.n_cols,
        "ones": c.ones_count,
        "trace": c.trace,
        "offdiag": c.offdiag,
        "diagonality": c.diagonality,
        "sparsity": str(c.sparsity),
        "sparsity_decimal": c.sparsity_decimal,
    }


def blocks_payload(matrix: ModularityMatrix, partition: BlockPartition) -> list[dict[str, Any]]:
    return [
        {"rows": [matrix.functional_names[i] for i in b.rows],
         "cols": [matrix.structor_names[j] for j in b.cols],
         "square": b.is_square}
        for b in partition.blocks
    ]


def outliers_payload(matrix: ModularityMatrix, partition: BlockPartition) -> list[dict[str, Any]]:
    return [
        {"row": i + 1, "col": j + 1,
         "functional": matrix.functional_names[i], "structor": matrix.structor_names[j]}
        for i, j in partition.outliers
    ]


def validation_payload(matrix: ModularityMatrix, report: ValidationReport) -> dict[str, Any]:
    return {
        "report": "validation",
        "name": matrix.name,
        "admissible": report.is_admissible,
        "findings": [
            {"severity": f.severity, "code": f.code, "index": f.index + 1, "label": f.label, "message": f.message}
            for f in report.findings
        ],
    }


def detection_payload(matrix: ModularityMatrix, det: BlockDetection) -> dict[str, Any]:
    blocks = blocks_payload(matrix, det.partition)
    for entry, flags in zip(blocks, det.flags):
        entry["well_composed"] = flags.well_composed
    return {"report": "blocks", "name": matrix.name, "modular": det.is_modular,
            "blocks": blocks, "outliers": outliers_payload(matrix, det.partition)}


def diagnosis_payload(matrix: ModularityMatrix, diag: DiagnosisReport) -> dict[str, Any]:
    return {
        "report": "diagnosis",
        "name": matrix.name,
        "blocks": blocks_payload(matrix, diag.partition),
        "outliers": [
            {"row": d.row + 1, "col": d.col + 1, "functional": d.functional, "structor": d.structor,
             "bridges": [d.row_block + 1, d.col_block + 1], "kind": d.kind,
             "suggestions": list(d.suggestions)}
            for d in diag.outlier_details
        ],
    }


def assessment_payload(matrix: ModularityMatrix, a: StandardAssessment) -> dict[str, Any]:
    out = {
        "report": "assessment",
        "name": a.name,
        "verdict": a.verdict,
        "admissible": a.is_admissible,
        "square": a.is_square,
        "full_rank": a.is_full_rank,
        "rank": a.rank,
        "block_diagonal": a.is_block_diagonal,
        "modular": a.is_modular,
        "minimal_outliers": a.minimal_outliers,
        "outlier_bound": str(a.outlier_bound),
        "criteria": criteria_payload(a.criteria),
        "blocks": blocks_payload(matrix, a.partition) if a.partition else [],
        "outliers": outliers_payload(matrix, a.partition) if a.partition else [],
    }
    if a.bordered_partition is not None:
        out["bordered_outliers"] = outliers_payload(matrix, a.bordered_partition)
    if a.alternative_partition is not None:
        out["alternative"] = {
            "outlier_count": a.alternative_outliers,
            "blocks": blocks_payload(matrix, a.alternative_partition),
            "outliers": outliers_payload(matrix, a.alternative_partition),
        }
    return out


def comparison_payload(left: ModularityMatrix, right: ModularityMatrix, c: DesignComparison) -> dict[str, Any]:
    return {
        "report": "comparison",
        "winner": c.winner,
        "left": assessment_payload(left, c.left),
        "right": assessment_payload(right, c.right),
    }


def reordering_payload(matrix: ModularityMatrix, r: Reordering, before: CriteriaReport,
                       after: CriteriaReport) -> dict[str, Any]:
    return {
        "report": "reorder",
        "name": matrix.name,
        "row_order": [matrix.functional_names[i] for i in r.row_perm],
        "col_order": [matrix.structor_names[j] for j in r.col_perm],
        "criteria_before": criteria_payload(before),
        "criteria": criteria_payload(after),
        "blocks": blocks_payload(r.matrix, r.partition),
        "outliers": outliers_payload(r.matrix, r.partition),
    }


def suggestions_payload(matrix: ModularityMatrix, found: list[Suggestion]) -> dict[str, Any]:
    return {
        "report": "suggestions",
        "name": matrix.name,
        "partitions": [
            {"block_count": s.block_count, "outlier_count": s.outlier_count,
             "blocks": blocks_payload(matrix, s.partition),
             "outliers": outliers_payload(matrix, s.partition)}
            for s in found
        ],
    }


# -- rendering ----------------------------------------------------------------

def render_grid(matrix: ModularityMatrix, partition: BlockPartition | None = None) -> str:
    """Matrix view: block numbers in the margins, rules where the block changes.

    Cells inside a block show 1/0, cells outside show ``.``, outliers ``X``.
    """
    rb = partition.row_block() if partition else {}
    cb = partition.col_block() if partition else {}
    width = max([len(s) for s in matrix.structor_names] + [1])
    lab_w = max([len(f) for f in matrix.functional_names] + [1])
    tag = (lambda b: f"[{b + 1}]") if partition else (lambda b: "")
    tag_w = max([len(tag(b)) for b in range(len(partition.blocks))] + [0]) if partition else 0

    def sep_before(j: int) -> str:
        return "|" if partition and j > 0 and cb[j] != cb[j - 1] else " "

    lines = []
    pad = " " * (lab_w + tag_w + 1)
    if partition:
        lines.append(pad + "".join(sep_before(j) + tag(cb[j]).rjust(width) for j in range(matrix.n_cols)))
    lines.append(pad + "".join(sep_before(j) + s.rjust(width) for j, s in enumerate(matrix.structor_names)))
    for i, (label, row) in enumerate(zip(matrix.functional_names, matrix.entries)):
        if partition and i > 0 and rb[i] != rb[i - 1]:
            lines.append(pad + "".join(("+" if sep_before(j) == "|" else "-") + "-" * width
                                       for j in range(matrix.n_cols)))
        cells = []
        for j, v in enumerate(row):
            if not partition:
                glyph = str(v)
            elif rb[i] == cb[j]:
                glyph = INSIDE_ONE if v else INSIDE_ZERO
            else:
                glyph = OUTLIER if v else OUTSIDE_ZERO
            cells.append(sep_before(j) + glyph.rjust(width))
        lines.append(label.ljust(lab_w) + (tag(rb[i]).rjust(tag_w) if partition else "") + " " + "".join(cells))
    return "\n".join(line.rstrip() for line in lines)


def _text_lines(value: Any, indent: int = 0) -> list[str]:
    pad = "  " * indent
    out: list[str] = []
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v:
                out.append(f"{pad}{k}:")
                out.extend(_text_lines(v, indent + 1))
            else:
                out.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, dict):
                flat = {k: v for k, v in item.items() if not _nested(v)}
                out.append(f"{pad}- " + ", ".join(f"{k}={_scalar(v)}" for k, v in flat.items()))
                for k, v in item.items():
                    if _nested(v):
                        out.append(f"{pad}  {k}:")
                        out.extend(_text_lines(v, indent + 2))
            else:
                out.append(f"{pad}- {_scalar(item)}")
    else:
        out.append(pad + _scalar(value))
    return out


def _nested(v: Any) -> bool:
    return isinstance(v, dict) or (isinstance(v, list) and any(isinstance(x, dict) for x in v))


def _scalar(v: Any) -> str:
    if isinstance(v, dict):
        return "(" + " ".join(f"{k}={_scalar(x)}" for k, x in v.items()) + ")"
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def _markdown(payload: dict[str, Any], title: str) -> list[str]:
    out = [f"# {title}", ""]
    scalars = {k: v for k, v in payload.items() if not isinstance(v, (dict, list))}
    if scalars:
        out += ["| field | value |", "|---|---|"]
        out += [f"| {k} | {_scalar(v)} |" for k, v in scalars.items()]
        out.append("")
    for k, v in payload.items():
        if isinstance(v, dict):
            out += [f"## {k}", ""]
            out += _markdown(v, k)[2:]
        elif isinstance(v, list):
            out += [f"## {k}", ""]
            if not v:
                out += ["(none)", ""]
            elif all(isinstance(x, dict) for x in v):
                keys = list(v[0].keys())
                out += ["| " + " | ".join(keys) + " |", "|" + "---|" * len(keys)]
                out += ["| " + " | ".join(_scalar(x.get(key)) for key in keys) + " |" for x in v]
                out.append("")
            else:
                out += [f"- {_scalar(x)}" for x in v] + [""]
    return out


def render_report(
    payload: dict[str, Any],
    fmt: Format = "text",
    matrix: ModularityMatrix | None = None,
    partition: BlockPartition | None = None,
) -> ReportDocument:
    """Deterministic rendering; ``matrix`` adds a grid view to text and markdown."""
    title = f"{payload.get('report', 'report')}: {payload.get('name', '')}".rstrip(": ")
    if fmt == "json":
        return ReportDocument("json", json.dumps(payload, indent=2) + "\n")
    if fmt == "text":
        lines = [title, "=" * len(title)]
        if matrix is not None:
            lines += [render_grid(matrix, partition), ""]
        lines += _text_lines({k: v for k, v in payload.items() if k not in ("report", "name")})
        return ReportDocument("text", "\n".join(lines) + "\n")
    if fmt == "markdown":
        lines = []
        body = _markdown({k: v for k, v in payload.items() if k not in ("report",)}, title)
        lines += body[:2]
        if matrix is not None:
            lines += ["```", render_grid(matrix, partition), "```", ""]
        lines += body[2:]
        return ReportDocument("markdown", "\n".join(lines).rstrip() + "\n")
    raise ValueError(f"unknown format {fmt!r}")


def parse_report(body: str) -> dict[str, Any]:
    return json.loads(body)
