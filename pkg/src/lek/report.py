"""Serialization of aggregate reports: JSON (stable schema), CSV, markdown.

Rendering is deterministic: fixed key order, repr-roundtrip floats, LF line
endings. Parsing a rendered JSON report and rendering it again reproduces
the bytes exactly.
"""

import io
import csv
import json

from .errors import LekError
from .evaluation import (
    AggregateReport,
    CaseResult,
    LesionType,
    TYPE_DISPLAY,
    TypeAggregate,
)
from .metrics import ConfusionCounts, MetricSet, METRIC_FIELDS

SCHEMA_VERSION = 1

FORMATS = ("json", "csv", "markdown")

# Column order of the overall summary table.
OVERALL_COLUMNS = (
    ("Accuracy", "accuracy"),
    ("Dice", "dice"),
    ("Jaccard Index", "jsi"),
    ("Sensitivity", "sensitivity"),
    ("Specificity", "specificity"),
)

# The two per-lesion-type table layouts.
TYPE_TABLE_A = (
    ("Sensitivity", "sensitivity"),
    ("Specificity", "specificity"),
    ("Accuracy", "accuracy"),
)
TYPE_TABLE_B = (
    ("Dice", "dice"),
    ("Jaccard Index", "jsi"),
    ("MCC", "mcc"),
)


def _metrics_obj(metrics):
    return {f: getattr(metrics, f) for f in METRIC_FIELDS}


def report_to_json(report):
    obj = {
        "schema_version": SCHEMA_VERSION,
        "label": report.label,
        "aggregation": report.aggregation,
        "overall": {"cases": report.overall_cases, **_metrics_obj(report.overall)},
        "per_type": {
            t.value: {"cases": agg.cases, **_metrics_obj(agg.metrics)}
            for t, agg in report.per_type.items()
        },
        "cases": [
            {
                "case_id": r.case_id,
                "lesion_type": r.lesion_type.value,
                "tp": r.counts.tp,
                "fp": r.counts.fp,
                "tn": r.counts.tn,
                "fn": r.counts.fn,
                **_metrics_obj(r.metrics),
            }
            for r in report.cases
        ],
    }
    return json.dumps(obj, indent=2) + "\n"


def _metrics_from_obj(obj):
    return MetricSet(**{f: float(obj[f]) for f in METRIC_FIELDS})


def report_from_json(text):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LekError(f"not a JSON report: {exc}") from exc
    version = obj.get("schema_version")
    if version != SCHEMA_VERSION:
        raise LekError(f"unsupported report schema_version {version!r}")
    cases = tuple(
        CaseResult(
            case_id=c["case_id"],
            lesion_type=LesionType(c["lesion_type"]),
            counts=ConfusionCounts(tp=c["tp"], fp=c["fp"], tn=c["tn"], fn=c["fn"]),
            metrics=_metrics_from_obj(c),
        )
        for c in obj["cases"]
    )
    per_type = {
        LesionType(name): TypeAggregate(
            cases=entry["cases"], metrics=_metrics_from_obj(entry)
        )
        for name, entry in obj["per_type"].items()
    }
    return AggregateReport(
        label=obj["label"],
        aggregation=obj["aggregation"],
        overall_cases=obj["overall"]["cases"],
        overall=_metrics_from_obj(obj["overall"]),
        per_type=per_type,
        cases=cases,
    )


def report_to_csv(report):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["scope", "name", "cases", *METRIC_FIELDS])
    def row(scope, name, cases, metrics):
        writer.writerow(
            [scope, name, cases, *(repr(getattr(metrics, f)) for f in METRIC_FIELDS)]
        )
    row("overall", report.label, report.overall_cases, report.overall)
    for lesion_type, agg in report.per_type.items():
        row("lesion_type", lesion_type.value, agg.cases, agg.metrics)
    for r in report.cases:
        row("case", r.case_id, 1, r.metrics)
    return buf.getvalue()


def _md_row(cells):
    return "| " + " | ".join(cells) + " |"


def _md_table(header, rows):
    lines = [_md_row(header), _md_row(["---"] * len(header))]
    lines.extend(_md_row(r) for r in rows)
    return "\n".join(lines)


def report_to_markdown(report):
    """Overall table plus the two per-lesion-type tables.

    The unknown lesion type contributes to the overall scores but gets no
    per-type row; absent types are omitted.
    """
    fmt = lambda v: f"{v:.3f}"
    parts = [
        _md_table(
            ["Method", *(name for name, _ in OVERALL_COLUMNS)],
            [
                [
                    report.label,
                    *(fmt(getattr(report.overall, f)) for _, f in OVERALL_COLUMNS),
                ]
            ],
        )
    ]
    type_rows = [
        (TYPE_DISPLAY[t], report.per_type[t].metrics)
        for t in (
            LesionType.NAEVUS,
            LesionType.MELANOMA,
            LesionType.SEBORRHOEIC_KERATOSIS,
        )
        if t in report.per_type
    ]
    if type_rows:
        for columns in (TYPE_TABLE_A, TYPE_TABLE_B):
            rows = [
                [name, *(fmt(getattr(m, f)) for _, f in columns)]
                for name, m in type_rows
            ]
            rows.append(
                ["Overall", *(fmt(getattr(report.overall, f)) for _, f in columns)]
            )
            parts.append(
                _md_table(["Lesion type", *(name for name, _ in columns)], rows)
            )
    return "\n\n".join(parts) + "\n"


def render_report(report, fmt):
    if fmt == "json":
        return report_to_json(report)
    if fmt == "csv":
        return report_to_csv(report)
    if fmt == "markdown":
        return report_to_markdown(report)
    raise ValueError(f"unknown format {fmt!r}")
