"""Shades of Gray illumination normalization.

The scene illuminant is estimated as the Minkowski p-mean of each channel
(p=1 degenerates to Gray-World, p -> inf approaches Max-RGB), and each
channel is divided by sqrt(3) times the unit-norm illuminant component.
Achromatic images are fixed points of the correction.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import AllBlackImageError, EmptyImageError
from .raster import RasterImage


@dataclass(frozen=True)
class ColorConstancyConfig:
    minkowski_p: float = 6.0
    gamma_linearize: bool = False

    def __post_init__(self):
        if self.minkowski_p < 1.0:
            raise ValueError("minkowski_p must be >= 1")


@dataclass(frozen=True)
class CorrectionStats:
    """Per-image diagnostics from one correction pass."""

    clipped_pixels: int
    identity_fallback: bool


DEFAULT_CONFIG = ColorConstancyConfig()


def _srgb_to_linear(x):
    return np.where(x <= 0.04045, x / 12.92, ((x + 0.055) / 1.055) ** 2.4)


def _linear_to_srgb(x):
    return np.where(x <= 0.0031308, x * 12.92, 1.055 * x ** (1.0 / 2.4) - 0.055)


def _working_values(img, cfg):
    v = img.pixels.astype(np.float64)
    if cfg.gamma_linearize:
        return _srgb_to_linear(v / 255.0)
    return v


def channel_power_means(img, cfg=DEFAULT_CONFIG):
    """Unnormalized illuminant: the Minkowski p-mean of each channel.

    Computed on raw 0..255 values (or linearized 0..1 values when configured);
    the scale cancels once the vector is normalized, and keeping raw values
    makes p=1 coincide bitwise with the plain channel mean.
    """
    if img.pixels.size == 0:
        raise EmptyImageError("no pixels to estimate from")
    p = cfg.minkowski_p
    v = _working_values(img, cfg)
    return np.array([np.mean(v[:, :, c] ** p) ** (1.0 / p) for c in range(3)])


def estimate_illuminant(img, cfg=DEFAULT_CONFIG):
    """Unit-length RGB illuminant estimate with non-negative components."""
    u = channel_power_means(img, cfg)
    norm = math.sqrt(float(np.sum(u * u)))
    if norm == 0.0:
        raise AllBlackImageError("illuminant undefined for an all-zero image")
    return u / norm


def correct_with_stats(img, cfg=DEFAULT_CONFIG):
    """Apply the correction and report clipping; returns (image, stats).

    An all-black input degrades to the identity transform instead of failing.
    """
    try:
        e = estimate_illuminant(img, cfg)
    except AllBlackImageError:
        return img, CorrectionStats(clipped_pixels=0, identity_fallback=True)
    # A channel that is zero everywhere keeps gain 1: any gain maps 0 to 0,
    # and this avoids the 1/0 blow-up.
    safe = np.where(e > 0.0, e, 1.0)
    gains = 1.0 / (math.sqrt(3.0) * safe)
    gains[e == 0.0] = 1.0
    if cfg.gamma_linearize:
        lin = _srgb_to_linear(img.pixels.astype(np.float64) / 255.0) * gains
        clipped = int(np.count_nonzero(lin > 1.0))
        out = _linear_to_srgb(np.clip(lin, 0.0, 1.0)) * 255.0
    else:
        out = img.pixels.astype(np.float64) * gains
        clipped = int(np.count_nonzero(out > 255.0))
        out = np.clip(out, 0.0, 255.0)
    corrected = RasterImage(np.floor(out + 0.5).astype(np.uint8))
    return corrected, CorrectionStats(clipped_pixels=clipped, identity_fallback=False)


def apply_shades_of_gray(img, cfg=DEFAULT_CONFIG):
    """Corrected image only; see correct_with_stats for the diagnostics."""
    return correct_with_stats(img, cfg)[0]
