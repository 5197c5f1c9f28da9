"""Fusion of two model predictions into one final mask.

Three strategies: pixelwise union (ADD), or picking whichever mask covers
the larger/smaller area. Before any strategy runs, the no-prediction
fallback applies: if exactly one input is empty, the other is returned
unchanged.
"""

from enum import Enum

from .errors import DimensionMismatchError
from .raster import BinaryMask


class EnsembleStrategy(Enum):
    ADD = "add"
    COMPARISON_LARGE = "large"
    COMPARISON_SMALL = "small"


STRATEGY_LABELS = {
    EnsembleStrategy.ADD: "Ensemble-A",
    EnsembleStrategy.COMPARISON_LARGE: "Ensemble-L",
    EnsembleStrategy.COMPARISON_SMALL: "Ensemble-S",
}


def fuse(a, b, strategy):
    """Fuse two same-sized masks; area ties in the comparison strategies go
    to the first input."""
    if (a.width, a.height) != (b.width, b.height):
        raise DimensionMismatchError(
            f"{a.width}x{a.height} vs {b.width}x{b.height}"
        )
    area_a = a.lesion_pixel_count
    area_b = b.lesion_pixel_count
    if area_a == 0:
        return a if area_b == 0 else b
    if area_b == 0:
        return a
    if strategy is EnsembleStrategy.ADD:
        return BinaryMask(a.bits | b.bits)
    if strategy is EnsembleStrategy.COMPARISON_LARGE:
        return a if area_a >= area_b else b
    if strategy is EnsembleStrategy.COMPARISON_SMALL:
        return a if area_a <= area_b else b
    raise TypeError(f"unknown strategy {strategy!r}")
