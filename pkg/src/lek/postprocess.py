"""Morphological cleanup of semantic-segmentation masks.

Two steps: fill background holes (background components with no path to the
image border, background treated 4-connected) and drop spurious foreground
artifacts. Defaults assume single-lesion images: keep only the largest
component and discard anything under 0.1% of the image area.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .raster import BinaryMask


@dataclass(frozen=True)
class MorphologyConfig:
    """Cleanup parameters.

    ``min_area`` is an absolute pixel count when integral (>= 1) and a
    fraction of the image area when a float in [0, 1).
    """

    min_area: float = 0.001
    keep_largest_only: bool = True
    connectivity: int = 8

    def __post_init__(self):
        if self.connectivity not in (4, 8):
            raise ValueError("connectivity must be 4 or 8")
        if self.min_area < 0:
            raise ValueError("min_area must be non-negative")
        if isinstance(self.min_area, float) and not self.min_area.is_integer():
            if self.min_area >= 1.0:
                raise ValueError("fractional min_area must be below 1.0")

    def min_area_pixels(self, total_pixels):
        if isinstance(self.min_area, float) and self.min_area < 1.0:
            return self.min_area * total_pixels
        return float(self.min_area)


DEFAULT_MORPHOLOGY = MorphologyConfig()


def fill_holes(mask):
    """Convert enclosed background to lesion; never removes lesion pixels."""
    filled = _kernels.fill_holes(mask.bits.view(np.uint8))
    return BinaryMask(filled.view(bool))


def remove_artifacts(mask, cfg=DEFAULT_MORPHOLOGY):
    """Drop small components, optionally all but the largest; never adds pixels.

    Area ties under keep_largest_only go to the component whose first pixel
    comes earliest in row-major order.
    """
    labels, areas = _kernels.label_components(mask.bits.view(np.uint8), cfg.connectivity)
    if areas.size == 0:
        return mask
    eligible = areas >= cfg.min_area_pixels(mask.width * mask.height)
    if cfg.keep_largest_only:
        keep = np.zeros_like(eligible)
        if eligible.any():
            # argmax returns the first maximum, matching the tie-break
            best = int(np.argmax(np.where(eligible, areas, -1)))
            keep[best] = True
    else:
        keep = eligible
    lut = np.concatenate(([False], keep))
    return BinaryMask(lut[labels])


def clean(mask, cfg=DEFAULT_MORPHOLOGY):
    """fill_holes followed by remove_artifacts."""
    return remove_artifacts(fill_holes(mask), cfg)
