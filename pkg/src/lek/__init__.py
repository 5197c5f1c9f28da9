"""Lesion Ensemble Kit: fusion, cleanup and scoring of dermoscopic
segmentation masks."""

__version__ = "0.1.0"

from .color_constancy import (
    ColorConstancyConfig,
    apply_shades_of_gray,
    estimate_illuminant,
)
from .ensemble import EnsembleStrategy, fuse
from .evaluation import (
    AggregateReport,
    CaseRecord,
    DatasetManifest,
    EvalSettings,
    LesionType,
    aggregate,
    evaluate_case,
    evaluate_manifest,
    load_manifest,
)
from .ingest import (
    ScoredInstance,
    ThresholdConfig,
    select_highest_confidence,
    threshold_probability_map,
)
from .metrics import ConfusionCounts, MetricSet, compute_metrics, confusion, score_masks
from .postprocess import MorphologyConfig, clean, fill_holes, remove_artifacts
from .raster import (
    BinaryMask,
    ProbabilityMap,
    RasterImage,
    decode_image,
    decode_mask,
    encode_image,
    encode_mask,
    resize_image,
    resize_mask,
)
from .report import render_report, report_from_json


def kernel_backend():
    """Name of the loaded kernel backend: "compiled" or "pure"."""
    from . import _kernels

    return _kernels.BACKEND
