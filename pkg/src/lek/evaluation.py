"""Dataset-level benchmark harness.

A manifest CSV binds each case to its image, ground truth, per-model
prediction masks and lesion type:

    case_id,image,truth,model:<name>[:clean],...,lesion_type

Paths are resolved relative to the manifest file. A ``:clean`` suffix on a
model column marks semantic-segmentation output that receives morphological
cleanup before fusion; instance-style models omit it. Per-case evaluation
loads the truth, resizes predictions to its resolution (nearest-neighbor),
cleans flagged models, fuses (or selects a single model), and scores.
"""

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .ensemble import STRATEGY_LABELS, EnsembleStrategy, fuse
from .errors import (
    CaseEvaluationError,
    DuplicateCaseIdError,
    EmptyInputError,
    EvaluationFailedError,
    LekError,
    ManifestError,
    MissingColumnError,
    UnknownLesionTypeError,
)
from .metrics import ConfusionCounts, MetricSet, METRIC_FIELDS, compute_metrics, confusion
from .postprocess import DEFAULT_MORPHOLOGY, MorphologyConfig, clean
from .raster import decode_mask, resize_mask


class LesionType(Enum):
    NAEVUS = "naevus"
    MELANOMA = "melanoma"
    SEBORRHOEIC_KERATOSIS = "seborrhoeic_keratosis"
    UNKNOWN = "unknown"


TYPE_DISPLAY = {
    LesionType.NAEVUS: "Naevus",
    LesionType.MELANOMA: "Melanoma",
    LesionType.SEBORRHOEIC_KERATOSIS: "SK",
    LesionType.UNKNOWN: "Unknown",
}

REQUIRED_COLUMNS = ("case_id", "image", "truth", "lesion_type")
MODEL_COLUMN_PREFIX = "model:"
CLEAN_FLAG = "clean"


@dataclass(frozen=True)
class ModelSpec:
    name: str
    clean: bool


@dataclass(frozen=True)
class CaseRecord:
    case_id: str
    image_path: Path
    truth_path: Path
    predictions: dict  # model name -> Path, in manifest column order
    lesion_type: LesionType


@dataclass(frozen=True)
class DatasetManifest:
    name: str
    models: tuple  # ModelSpec, in column order
    records: tuple  # CaseRecord

    def missing_paths(self):
        """(case_id, path) pairs for referenced files that do not exist."""
        missing = []
        for rec in self.records:
            paths = [rec.image_path, rec.truth_path, *rec.predictions.values()]
            for p in paths:
                if not p.is_file():
                    missing.append((rec.case_id, p))
        return missing


def _parse_model_column(column):
    parts = column.split(":")
    name = parts[1] if len(parts) > 1 else ""
    flags = parts[2:]
    if not name:
        raise ManifestError(f"model column {column!r} has no name")
    for flag in flags:
        if flag != CLEAN_FLAG:
            raise ManifestError(f"model column {column!r}: unknown flag {flag!r}")
    return ModelSpec(name=name, clean=CLEAN_FLAG in flags)


def load_manifest(path):
    """Parse and validate a manifest CSV."""
    path = Path(path)
    base = path.parent
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in REQUIRED_COLUMNS:
            if col not in header:
                raise MissingColumnError(f"{path}: missing column {col!r}")
        model_columns = [c for c in header if c.startswith(MODEL_COLUMN_PREFIX)]
        if not model_columns:
            raise MissingColumnError(f"{path}: no model:<name> columns")
        models = tuple(_parse_model_column(c) for c in model_columns)
        if len({m.name for m in models}) != len(models):
            raise ManifestError(f"{path}: duplicate model names")

        records = []
        seen = set()
        for row in reader:
            case_id = (row.get("case_id") or "").strip()
            if not case_id:
                raise ManifestError(f"{path}: row with empty case_id")
            if case_id in seen:
                raise DuplicateCaseIdError(f"{path}: duplicate case_id {case_id!r}")
            seen.add(case_id)
            try:
                lesion_type = LesionType(row["lesion_type"])
            except ValueError:
                raise UnknownLesionTypeError(
                    f"{path}: case {case_id}: lesion_type {row['lesion_type']!r}"
                ) from None
            cells = {}
            for col in ("image", "truth", *model_columns):
                cell = (row.get(col) or "").strip()
                if not cell:
                    raise ManifestError(f"{path}: case {case_id}: empty {col!r} cell")
                cells[col] = base / cell
            records.append(
                CaseRecord(
                    case_id=case_id,
                    image_path=cells["image"],
                    truth_path=cells["truth"],
                    predictions={
                        spec.name: cells[col]
                        for spec, col in zip(models, model_columns)
                    },
                    lesion_type=lesion_type,
                )
            )
    if not records:
        raise ManifestError(f"{path}: no case rows")
    return DatasetManifest(name=path.stem, models=models, records=tuple(records))


@dataclass(frozen=True)
class EvalSettings:
    """How to turn per-model predictions into one scored mask.

    ``model`` selects single-model mode and overrides ``strategy``; ensemble
    mode needs exactly two model columns (first and second become the a/b
    inputs of the fusion rule).
    """

    strategy: EnsembleStrategy = EnsembleStrategy.ADD
    model: str | None = None
    morphology: MorphologyConfig = field(default=DEFAULT_MORPHOLOGY)

    @property
    def label(self):
        if self.model is not None:
            return self.model
        return STRATEGY_LABELS[self.strategy]


@dataclass(frozen=True)
class CaseResult:
    case_id: str
    lesion_type: LesionType
    counts: ConfusionCounts
    metrics: MetricSet


def evaluate_case(record, models, settings=EvalSettings()):
    """Run the per-case pipeline; failures carry the case id."""
    try:
        truth = decode_mask(record.truth_path.read_bytes())
        preds = {}
        for spec in models:
            mask = decode_mask(record.predictions[spec.name].read_bytes())
            if (mask.width, mask.height) != (truth.width, truth.height):
                mask = resize_mask(mask, truth.width, truth.height)
            if spec.clean:
                mask = clean(mask, settings.morphology)
            preds[spec.name] = mask
        if settings.model is not None:
            if settings.model not in preds:
                raise LekError(f"manifest has no model named {settings.model!r}")
            fused = preds[settings.model]
        else:
            if len(models) != 2:
                raise LekError(
                    f"ensemble mode needs exactly 2 models, manifest has {len(models)}"
                )
            fused = fuse(preds[models[0].name], preds[models[1].name], settings.strategy)
        counts = confusion(fused, truth)
    except (LekError, OSError) as exc:
        raise CaseEvaluationError(record.case_id, exc) from exc
    return CaseResult(
        case_id=record.case_id,
        lesion_type=record.lesion_type,
        counts=counts,
        metrics=compute_metrics(counts),
    )


def evaluate_manifest(manifest, settings=EvalSettings(), workers=1):
    """Evaluate every case; raises EvaluationFailedError listing all failures.

    Results are sorted by case_id before aggregation, so the outcome is
    independent of the worker count.
    """
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(
                pool.map(
                    lambda rec: _try_case(rec, manifest.models, settings),
                    manifest.records,
                )
            )
    else:
        outcomes = [_try_case(rec, manifest.models, settings) for rec in manifest.records]
    errors = sorted(
        (o for o in outcomes if isinstance(o, CaseEvaluationError)),
        key=lambda e: e.case_id,
    )
    if errors:
        raise EvaluationFailedError(errors)
    return aggregate(outcomes, label=settings.label)


def _try_case(record, models, settings):
    try:
        return evaluate_case(record, models, settings)
    except CaseEvaluationError as exc:
        return exc


@dataclass(frozen=True)
class TypeAggregate:
    cases: int
    metrics: MetricSet


@dataclass(frozen=True)
class AggregateReport:
    label: str
    aggregation: str  # "per_image" or "pooled"
    overall_cases: int
    overall: MetricSet
    per_type: dict  # LesionType -> TypeAggregate, only for types present
    cases: tuple  # CaseResult, sorted by case_id


def _mean_metrics(results):
    n = len(results)
    return MetricSet(
        **{
            f: sum(getattr(r.metrics, f) for r in results) / n
            for f in METRIC_FIELDS
        }
    )


def _pooled_metrics(results):
    total = results[0].counts
    for r in results[1:]:
        total = total + r.counts
    return compute_metrics(total)


def aggregate(results, label="", pooled=False):
    """Combine per-case results into per-type and overall summaries.

    Default is the mean of per-image metrics; ``pooled=True`` instead sums
    the confusion counts over cases and scores once (no fidelity to any
    published protocol is claimed for pooled mode).
    """
    if not results:
        raise EmptyInputError("no case results to aggregate")
    results = sorted(results, key=lambda r: r.case_id)
    combine = _pooled_metrics if pooled else _mean_metrics
    per_type = {}
    for lesion_type in LesionType:
        subset = [r for r in results if r.lesion_type is lesion_type]
        if subset:
            per_type[lesion_type] = TypeAggregate(
                cases=len(subset), metrics=combine(subset)
            )
    return AggregateReport(
        label=label,
        aggregation="pooled" if pooled else "per_image",
        overall_cases=len(results),
        overall=combine(results),
        per_type=per_type,
        cases=tuple(results),
    )
