"""Confusion counting and the six-score evaluation suite.

Lesion pixels are the positive class. Degenerate denominators follow the
empty-matches-empty convention: a prediction identical to the truth scores
1.0 everywhere, even when one class is absent.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DimensionMismatchError, EmptyCountsError


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self):
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            raise ValueError("counts must be non-negative")

    @property
    def total(self):
        return self.tp + self.fp + self.tn + self.fn

    def __add__(self, other):
        return ConfusionCounts(
            self.tp + other.tp,
            self.fp + other.fp,
            self.tn + other.tn,
            self.fn + other.fn,
        )


@dataclass(frozen=True)
class MetricSet:
    sensitivity: float
    specificity: float
    accuracy: float
    jsi: float
    dice: float
    mcc: float


METRIC_FIELDS = ("sensitivity", "specificity", "accuracy", "jsi", "dice", "mcc")


def confusion(pred, truth):
    """Tally per-pixel TP/FP/TN/FN between two masks of equal dimensions."""
    if (pred.width, pred.height) != (truth.width, truth.height):
        raise DimensionMismatchError(
            f"prediction {pred.width}x{pred.height} vs truth {truth.width}x{truth.height}"
        )
    tp, fp, tn, fn = _kernels.confusion_counts(
        pred.bits.view(np.uint8), truth.bits.view(np.uint8)
    )
    return ConfusionCounts(tp=tp, fp=fp, tn=tn, fn=fn)


def compute_metrics(c):
    """Six scores from one set of counts.

    Conventions for empty denominators: sensitivity/specificity with no
    positives/negatives in play -> 1.0; jsi and dice over two empty masks ->
    1.0; mcc -> 1.0 on exact agreement (fp == fn == 0), else 0.0 when any
    factor under the root vanishes.
    """
    tp, fp, tn, fn = c.tp, c.fp, c.tn, c.fn
    if c.total == 0:
        raise EmptyCountsError("no pixels counted")
    sensitivity = tp / (tp + fn) if tp + fn else 1.0
    specificity = tn / (fp + tn) if fp + tn else 1.0
    accuracy = (tp + tn) / c.total
    jsi = tp / (tp + fp + fn) if tp + fp + fn else 1.0
    dice = 2 * tp / (2 * tp + fp + fn) if tp + fp + fn else 1.0
    if fp == 0 and fn == 0:
        mcc = 1.0
    else:
        denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn)
        mcc = (tp * tn - fp * fn) / math.sqrt(denom) if denom else 0.0
    return MetricSet(
        sensitivity=sensitivity,
        specificity=specificity,
        accuracy=accuracy,
        jsi=jsi,
        dice=dice,
        mcc=mcc,
    )


def score_masks(pred, truth):
    """Convenience: confusion + compute_metrics in one call."""
    return compute_metrics(confusion(pred, truth))
