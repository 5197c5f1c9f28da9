"""Deterministic synthetic lesion fixtures for desk-scale end-to-end tests.

Each case gets a procedurally drawn lesion (ellipse union with a ragged,
hash-jittered border), a skin-toned image, and two simulated model outputs
derived from the truth by a per-case recipe (dilate/erode by k, add a stray
speck, punch an interior hole, or drop the prediction entirely). model_a
plays the semantic-segmentation role (manifest flag ``:clean``), model_b the
instance role.

All randomness comes from a fixed linear congruential generator and all
geometry is integer arithmetic, so a given spec regenerates byte-identical
files on any platform.
"""

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .evaluation import load_manifest
from .raster import BinaryMask, RasterImage, encode_image, encode_mask

LCG_MULTIPLIER = 1664525
LCG_INCREMENT = 1013904223
LCG_MODULUS = 2**32

MODEL_A = "model_a"  # cleaned (semantic-style)
MODEL_B = "model_b"  # used verbatim (instance-style)

LESION_TYPE_CYCLE = ("naevus", "melanoma", "seborrhoeic_keratosis")

# (model_a ops, model_b ops) per case, cycled when more cases are requested.
# Case 7 drops model_a's prediction; case 4 punches a hole into model_b.
DEFAULT_RECIPES = (
    (("hole",), ("dilate:1",)),
    (("speck",), ("erode:1",)),
    (("hole", "speck"), ("dilate:2",)),
    (("erode:1",), ("erode:2",)),
    (("dilate:1",), ("hole",)),
    (("speck",), ("drop",)),
    (("hole",), ("dilate:1",)),
    (("drop",), ("erode:1",)),
    (("dilate:2",), ("hole",)),
    ((), ()),
)


@dataclass(frozen=True)
class FixtureSpec:
    cases: int = 10
    width: int = 64
    height: int = 64
    seed: int = 2017
    recipes: tuple = DEFAULT_RECIPES

    def recipe_for(self, index):
        return self.recipes[index % len(self.recipes)]


class Lcg:
    """32-bit linear congruential generator (constants above)."""

    def __init__(self, seed):
        self.state = seed % LCG_MODULUS

    def next_u32(self):
        self.state = (LCG_MULTIPLIER * self.state + LCG_INCREMENT) % LCG_MODULUS
        return self.state

    def randint(self, lo, hi):
        """Uniform-ish integer in [lo, hi], inclusive."""
        return lo + self.next_u32() % (hi - lo + 1)


def _pixel_hash(flat_index, salt):
    """Vectorized per-pixel hash in [0, 255]."""
    x = (flat_index.astype(np.uint64) + np.uint64(salt)) & np.uint64(0xFFFFFFFF)
    x = (np.uint64(LCG_MULTIPLIER) * x + np.uint64(LCG_INCREMENT)) & np.uint64(0xFFFFFFFF)
    x = (np.uint64(LCG_MULTIPLIER) * x + np.uint64(LCG_INCREMENT)) & np.uint64(0xFFFFFFFF)
    return ((x >> np.uint64(16)) & np.uint64(0xFF)).astype(np.int64)


def _ellipse(width, height, cx, cy, rx, ry):
    ys = np.arange(height, dtype=np.int64)[:, None]
    xs = np.arange(width, dtype=np.int64)[None, :]
    q = (xs - cx) ** 2 * ry**2 + (ys - cy) ** 2 * rx**2
    return q <= (rx * ry) ** 2


def draw_lesion(width, height, rng):
    """Blob of ellipses with a ragged border, kept away from the image edge."""
    cx = rng.randint(int(width * 0.38), int(width * 0.62))
    cy = rng.randint(int(height * 0.38), int(height * 0.62))
    rx = rng.randint(max(4, int(width * 0.14)), max(5, int(width * 0.26)))
    ry = rng.randint(max(4, int(height * 0.14)), max(5, int(height * 0.26)))
    mask = _ellipse(width, height, cx, cy, rx, ry)

    # ragged main boundary: flip a hashed subset of the band around q ~ r^2
    ys = np.arange(height, dtype=np.int64)[:, None]
    xs = np.arange(width, dtype=np.int64)[None, :]
    q = (xs - cx) ** 2 * ry**2 + (ys - cy) ** 2 * rx**2
    r2 = (rx * ry) ** 2
    band = (q * 4 >= r2 * 3) & (q * 4 <= r2 * 5)
    flat = (ys * width + xs).astype(np.int64)
    jitter = band & (_pixel_hash(flat, rng.next_u32()) % 3 == 0)
    mask = mask ^ jitter

    for _ in range(rng.randint(1, 3)):
        sx = cx + rng.randint(-rx // 2, rx // 2)
        sy = cy + rng.randint(-ry // 2, ry // 2)
        sr = max(2, rng.randint(rx // 4, max(2, (rx * 2) // 5)))
        mask |= _ellipse(width, height, sx, sy, sr, sr)
    return mask


def dilate(mask, iterations=1):
    out = mask.copy()
    for _ in range(iterations):
        padded = np.pad(out, 1, constant_values=False)
        grown = out.copy()
        for dy in (-1, 0, 1):
            for dx in (-1, 0, 1):
                grown |= padded[1 + dy : 1 + dy + out.shape[0], 1 + dx : 1 + dx + out.shape[1]]
        out = grown
    return out


def erode(mask, iterations=1):
    out = mask.copy()
    for _ in range(iterations):
        padded = np.pad(out, 1, constant_values=False)
        kept = out.copy()
        for dy in (-1, 0, 1):
            for dx in (-1, 0, 1):
                kept &= padded[1 + dy : 1 + dy + out.shape[0], 1 + dx : 1 + dx + out.shape[1]]
        out = kept
    return out


def _fill_holes_bits(mask):
    from . import _kernels

    return _kernels.fill_holes(mask.astype(np.uint8)).view(bool)


def _punch_hole(mask, rng):
    """Clear a small ellipse near the centroid; shrink until the cut is a
    genuine enclosed hole (hole-filling restores what it restored before)."""
    ys, xs = np.nonzero(mask)
    if ys.size == 0:
        return mask
    cy = int(ys.sum() // ys.size) + rng.randint(-2, 2)
    cx = int(xs.sum() // xs.size) + rng.randint(-2, 2)
    filled_before = _fill_holes_bits(mask)
    for radius in range(rng.randint(2, 4), 0, -1):
        hole = _ellipse(mask.shape[1], mask.shape[0], cx, cy, radius, radius)
        candidate = mask & ~hole
        if np.count_nonzero(candidate) < np.count_nonzero(mask) and np.array_equal(
            _fill_holes_bits(candidate), filled_before
        ):
            return candidate
    return mask


def _add_speck(mask, rng):
    """2x2 foreground block in an image corner, guaranteed off the lesion."""
    corner = rng.next_u32() % 4
    h, w = mask.shape
    candidates = [(rng.randint(2, 4), rng.randint(2, 4)), (2, 2)]
    out = mask.copy()
    for x, y in candidates:
        if corner in (1, 3):
            x = w - 2 - x
        if corner in (2, 3):
            y = h - 2 - y
        if not mask[y : y + 2, x : x + 2].any():
            out[y : y + 2, x : x + 2] = True
            return out
    raise AssertionError("no speck placement clear of the lesion")


def perturb(truth, ops, rng):
    """Apply a recipe to the truth; guarantees dilate >= truth >= erode."""
    mask = truth.copy()
    for op in ops:
        if op == "drop":
            mask = np.zeros_like(mask)
        elif op == "hole":
            mask = _punch_hole(mask, rng)
        elif op == "speck":
            mask = _add_speck(mask, rng)
        elif op.startswith("dilate:"):
            mask = dilate(mask, int(op.split(":")[1]))
        elif op.startswith("erode:"):
            mask = erode(mask, int(op.split(":")[1]))
        else:
            raise ValueError(f"unknown recipe op {op!r}")
    return mask


def render_image(truth, width, height, salt):
    """Skin-toned backdrop with a darker lesion region and hash noise."""
    ys = np.arange(height, dtype=np.int64)[:, None]
    xs = np.arange(width, dtype=np.int64)[None, :]
    flat = ys * width + xs
    noise = _pixel_hash(flat, salt) % 13 - 6
    gradient = (xs + ys) * 10 // (width + height)
    skin = np.stack(
        [208 + gradient + noise, 172 + gradient + noise, 150 + gradient + noise],
        axis=2,
    )
    lesion = np.stack([122 + noise, 84 + noise, 64 + noise], axis=2)
    pixels = np.where(truth[:, :, None], lesion, skin)
    return RasterImage(np.clip(pixels, 0, 255).astype(np.uint8))


def generate_fixtures(spec, out_dir):
    """Write images, truths, two prediction sets and a manifest CSV.

    Returns the parsed manifest. Regeneration with the same spec is
    byte-identical.
    """
    out_dir = Path(out_dir)
    for sub in ("images", "truth", f"pred_{MODEL_A}", f"pred_{MODEL_B}"):
        (out_dir / sub).mkdir(parents=True, exist_ok=True)

    master = Lcg(spec.seed)
    case_seeds = [master.next_u32() for _ in range(spec.cases)]

    rows = []
    for i, case_seed in enumerate(case_seeds):
        case_id = f"synth_{i:03d}"
        truth = draw_lesion(spec.width, spec.height, Lcg(case_seed))
        ops_a, ops_b = spec.recipe_for(i)
        pred_a = perturb(truth, ops_a, Lcg(case_seed ^ 0xA5A5A5A5))
        pred_b = perturb(truth, ops_b, Lcg(case_seed ^ 0x5A5A5A5A))
        image = render_image(truth, spec.width, spec.height, case_seed)

        files = {
            f"images/{case_id}.png": encode_image(image),
            f"truth/{case_id}.png": encode_mask(BinaryMask(truth)),
            f"pred_{MODEL_A}/{case_id}.png": encode_mask(BinaryMask(pred_a)),
            f"pred_{MODEL_B}/{case_id}.png": encode_mask(BinaryMask(pred_b)),
        }
        for rel, data in files.items():
            (out_dir / rel).write_bytes(data)
        rows.append(
            [
                case_id,
                f"images/{case_id}.png",
                f"truth/{case_id}.png",
                f"pred_{MODEL_A}/{case_id}.png",
                f"pred_{MODEL_B}/{case_id}.png",
                LESION_TYPE_CYCLE[i % len(LESION_TYPE_CYCLE)],
            ]
        )

    manifest_path = out_dir / "manifest.csv"
    with open(manifest_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["case_id", "image", "truth", f"model:{MODEL_A}:clean", f"model:{MODEL_B}", "lesion_type"]
        )
        writer.writerows(rows)
    return load_manifest(manifest_path)
