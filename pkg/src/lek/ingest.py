"""Adapters that turn raw model outputs into binary predictions.

Two external shapes are accepted: per-pixel probability maps (8- or 16-bit
grayscale PNG, value/255 or value/65535) and scored instance sets (a
directory of mask PNGs plus a sidecar ``instances.csv`` with header
``instance_file,confidence``).
"""

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    DimensionMismatchError,
    EmptyInputError,
    MissingColumnError,
    UnsupportedFormatError,
)
from .raster import BinaryMask, ProbabilityMap, decode_mask, open_decoded

INSTANCES_CSV = "instances.csv"


@dataclass(frozen=True)
class ThresholdConfig:
    cutoff: float = 0.5

    def __post_init__(self):
        if not 0.0 < self.cutoff < 1.0:
            raise ValueError("cutoff must lie strictly between 0 and 1")


@dataclass(frozen=True)
class ScoredInstance:
    mask: BinaryMask
    confidence: float

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError("confidence must lie in [0, 1]")


def threshold_probability_map(pmap, cfg=ThresholdConfig()):
    """Binarize a probability map: value >= cutoff is lesion."""
    return BinaryMask(pmap.values >= cfg.cutoff)


def select_highest_confidence(instances, empty_size=None):
    """Pick the mask with the highest confidence; ties go to the first listed.

    An empty instance list yields an all-background mask of the declared
    ``empty_size=(width, height)`` so downstream fusion can apply its
    no-prediction fallback.
    """
    if not instances:
        if empty_size is None:
            raise EmptyInputError("no instances and no declared size")
        width, height = empty_size
        return BinaryMask.all_background(width, height)
    first = instances[0].mask
    for inst in instances[1:]:
        if (inst.mask.width, inst.mask.height) != (first.width, first.height):
            raise DimensionMismatchError("instance masks must share dimensions")
    best = max(instances, key=lambda inst: inst.confidence)
    return best.mask


def decode_probability_map(data):
    """Decode a grayscale PNG into a ProbabilityMap."""
    im = open_decoded(data, {"PNG"})
    if im.mode == "L":
        return ProbabilityMap(np.asarray(im, dtype=np.float64) / 255.0)
    if im.mode == "1":
        return ProbabilityMap(np.asarray(im, dtype=np.float64))
    if im.mode in ("I", "I;16", "I;16B"):
        arr = np.asarray(im, dtype=np.float64)
        if arr.size and arr.max() > 65535:
            raise UnsupportedFormatError("sample depth above 16 bits")
        return ProbabilityMap(arr / 65535.0)
    raise UnsupportedFormatError(
        f"probability maps must be 8- or 16-bit grayscale PNG, got mode {im.mode}"
    )


def load_instance_directory(dir_path):
    """Read a scored instance set from ``dir_path``.

    The directory holds one mask PNG per instance and an ``instances.csv``
    sidecar listing ``instance_file,confidence`` rows. Returns instances in
    CSV row order (which is also the tie-break order).
    """
    dir_path = Path(dir_path)
    sidecar = dir_path / INSTANCES_CSV
    with open(sidecar, newline="") as fh:
        reader = csv.DictReader(fh)
        fields = reader.fieldnames or []
        for required in ("instance_file", "confidence"):
            if required not in fields:
                raise MissingColumnError(f"{sidecar}: missing column {required!r}")
        instances = []
        for row in reader:
            mask = decode_mask((dir_path / row["instance_file"]).read_bytes())
            instances.append(ScoredInstance(mask=mask, confidence=float(row["confidence"])))
    return instances
