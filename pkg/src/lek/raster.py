"""Image and mask containers, PNG/JPEG codecs, and resizing.

Masks travel as 8-bit grayscale PNGs with background=0 and lesion=255;
decoding treats luminance >= threshold (default 128) as lesion, which also
copes with anti-aliased ground-truth files. Images are decoded to 8-bit RGB
regardless of the source mode.
"""

import io

import numpy as np
from PIL import Image, UnidentifiedImageError

from . import _kernels
from .errors import (
    EmptyImageError,
    MalformedFileError,
    UnsupportedFormatError,
    ZeroDimensionError,
)

DEFAULT_LESION_THRESHOLD = 128


class RasterImage:
    """8-bit RGB image; ``pixels`` is a read-only (height, width, 3) array."""

    __slots__ = ("pixels",)

    def __init__(self, pixels):
        arr = np.array(pixels, dtype=np.uint8, order="C")
        if arr.ndim != 3 or arr.shape[2] != 3:
            raise ValueError("expected a (height, width, 3) pixel grid")
        arr.setflags(write=False)
        self.pixels = arr

    @property
    def width(self):
        return self.pixels.shape[1]

    @property
    def height(self):
        return self.pixels.shape[0]

    def __eq__(self, other):
        if not isinstance(other, RasterImage):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and np.array_equal(
            self.pixels, other.pixels
        )

    def __repr__(self):
        return f"RasterImage({self.width}x{self.height})"


class BinaryMask:
    """Two-valued lesion/background grid; ``bits`` is read-only (h, w) bool."""

    __slots__ = ("bits",)

    def __init__(self, bits):
        arr = np.array(bits, dtype=bool, order="C")
        if arr.ndim != 2:
            raise ValueError("expected a (height, width) bit grid")
        arr.setflags(write=False)
        self.bits = arr

    @classmethod
    def all_background(cls, width, height):
        return cls(np.zeros((height, width), dtype=bool))

    @property
    def width(self):
        return self.bits.shape[1]

    @property
    def height(self):
        return self.bits.shape[0]

    @property
    def lesion_pixel_count(self):
        return int(np.count_nonzero(self.bits))

    def __eq__(self, other):
        if not isinstance(other, BinaryMask):
            return NotImplemented
        return self.bits.shape == other.bits.shape and np.array_equal(
            self.bits, other.bits
        )

    def __repr__(self):
        return f"BinaryMask({self.width}x{self.height}, {self.lesion_pixel_count} lesion px)"


class ProbabilityMap:
    """Per-pixel lesion confidence in [0, 1]; ``values`` is (h, w) float64."""

    __slots__ = ("values",)

    def __init__(self, values):
        arr = np.array(values, dtype=np.float64, order="C")
        if arr.ndim != 2:
            raise ValueError("expected a (height, width) value grid")
        if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
            raise ValueError("probability values must lie in [0, 1]")
        arr.setflags(write=False)
        self.values = arr

    @property
    def width(self):
        return self.values.shape[1]

    @property
    def height(self):
        return self.values.shape[0]


def open_decoded(data, formats):
    """Open image bytes, enforcing one of the given PIL format names.

    Raises MalformedFileError for undecodable bytes and UnsupportedFormatError
    for anything decodable but outside ``formats``.
    """
    try:
        im = Image.open(io.BytesIO(data))
    except UnidentifiedImageError as exc:
        raise MalformedFileError(str(exc)) from exc
    if im.format not in formats:
        raise UnsupportedFormatError(
            f"got {im.format or 'unknown'}, expected one of {sorted(formats)}"
        )
    try:
        im.load()
    except (OSError, SyntaxError, ValueError) as exc:
        raise MalformedFileError(str(exc)) from exc
    return im


def decode_image(data):
    """Decode PNG or JPEG bytes to an RGB RasterImage.

    Grayscale sources expand to R=G=B; palette and alpha modes are collapsed
    to plain RGB.
    """
    im = open_decoded(data, {"PNG", "JPEG"})
    return RasterImage(np.asarray(im.convert("RGB")))


def encode_image(img):
    """Encode a RasterImage as lossless PNG bytes."""
    buf = io.BytesIO()
    Image.fromarray(img.pixels, mode="RGB").save(buf, format="PNG")
    return buf.getvalue()


def _luminance_u8(im):
    """8-bit luminance grid for any PNG mode a mask may arrive in."""
    if im.mode == "L":
        return np.asarray(im)
    if im.mode == "1":
        return np.asarray(im, dtype=np.uint8) * 255
    if im.mode in ("I", "I;16", "I;16B"):
        arr = np.asarray(im, dtype=np.int64)
        if arr.size and arr.max() > 65535:
            raise UnsupportedFormatError("mask sample depth above 16 bits")
        return (arr >> 8).astype(np.uint8)
    rgb = np.asarray(im.convert("RGB"), dtype=np.uint32)
    luma = (299 * rgb[:, :, 0] + 587 * rgb[:, :, 1] + 114 * rgb[:, :, 2] + 500) // 1000
    return luma.astype(np.uint8)


def decode_mask(data, lesion_threshold=DEFAULT_LESION_THRESHOLD):
    """Decode PNG bytes to a BinaryMask: luminance >= threshold is lesion."""
    if not 1 <= lesion_threshold <= 255:
        raise ValueError("lesion_threshold must be in [1, 255]")
    im = open_decoded(data, {"PNG"})
    return BinaryMask(_luminance_u8(im) >= lesion_threshold)


def encode_mask(mask):
    """Encode a BinaryMask as 8-bit grayscale PNG bytes (0/255)."""
    buf = io.BytesIO()
    gray = mask.bits.astype(np.uint8) * 255
    Image.fromarray(gray, mode="L").save(buf, format="PNG")
    return buf.getvalue()


def _check_resize_args(width, height, target_w, target_h):
    if target_w < 1 or target_h < 1:
        raise ZeroDimensionError(f"target {target_w}x{target_h}")
    if width == 0 or height == 0:
        raise EmptyImageError("cannot resize an empty grid")


def resize_image(img, target_w, target_h):
    """Bilinear resize to exactly (target_w, target_h)."""
    _check_resize_args(img.width, img.height, target_w, target_h)
    return RasterImage(_kernels.resize_bilinear_rgb(img.pixels, target_h, target_w))


def resize_mask(mask, target_w, target_h):
    """Nearest-neighbor resize; the output stays strictly two-valued."""
    _check_resize_args(mask.width, mask.height, target_w, target_h)
    resized = _kernels.resize_nearest_u8(mask.bits.view(np.uint8), target_h, target_w)
    return BinaryMask(resized.view(bool))
