"""Numpy fallback for the per-pixel hot loops.

Outputs are bit-identical to the compiled core in ``_core.pyx``; the test
suite enforces this on random inputs. Morphology here runs as vectorized
propagation sweeps (one sweep per step of geodesic distance) instead of a
single linear scan, so it is slower on snake-like components but fine on
lesion-shaped blobs.

Contracts (shared with the compiled core):
  masks are C-contiguous uint8 arrays of 0/1, shape (h, w);
  images are C-contiguous uint8 arrays, shape (h, w, 3).
"""

import numpy as np

BACKEND = "pure"


def fill_holes(mask):
    """Set background components not reachable from the border (4-connected)
    to foreground. Never clears a foreground pixel."""
    h, w = mask.shape
    out = np.ones((h, w), dtype=np.uint8)
    if h == 0 or w == 0:
        return out
    bg = mask == 0
    reach = np.zeros((h, w), dtype=bool)
    reach[0, :] = bg[0, :]
    reach[-1, :] |= bg[-1, :]
    reach[:, 0] |= bg[:, 0]
    reach[:, -1] |= bg[:, -1]
    n_reach = np.count_nonzero(reach)
    while True:
        grown = reach.copy()
        grown[1:, :] |= reach[:-1, :]
        grown[:-1, :] |= reach[1:, :]
        grown[:, 1:] |= reach[:, :-1]
        grown[:, :-1] |= reach[:, 1:]
        grown &= bg
        n_grown = np.count_nonzero(grown)
        if n_grown == n_reach:
            break
        reach = grown
        n_reach = n_grown
    out[reach] = 0
    return out


def label_components(mask, connectivity):
    """Label foreground components 1..K in row-major order of their first
    pixel; background stays 0. Returns (labels int32, areas int64[K])."""
    if connectivity not in (4, 8):
        raise ValueError("connectivity must be 4 or 8")
    h, w = mask.shape
    labels = np.zeros((h, w), dtype=np.int32)
    if h == 0 or w == 0:
        return labels, np.zeros(0, dtype=np.int64)
    fg = mask != 0
    if not fg.any():
        return labels, np.zeros(0, dtype=np.int64)
    n = h * w
    # Each pixel starts as its own flat index; min-propagation converges to
    # the component's smallest index, i.e. its first pixel in scan order.
    idx = np.arange(n, dtype=np.int64).reshape(h, w)
    lab = np.where(fg, idx, n)
    while True:
        nxt = lab.copy()
        np.minimum(nxt[1:, :], lab[:-1, :], out=nxt[1:, :])
        np.minimum(nxt[:-1, :], lab[1:, :], out=nxt[:-1, :])
        np.minimum(nxt[:, 1:], lab[:, :-1], out=nxt[:, 1:])
        np.minimum(nxt[:, :-1], lab[:, 1:], out=nxt[:, :-1])
        if connectivity == 8:
            np.minimum(nxt[1:, 1:], lab[:-1, :-1], out=nxt[1:, 1:])
            np.minimum(nxt[:-1, :-1], lab[1:, 1:], out=nxt[:-1, :-1])
            np.minimum(nxt[1:, :-1], lab[:-1, 1:], out=nxt[1:, :-1])
            np.minimum(nxt[:-1, 1:], lab[1:, :-1], out=nxt[:-1, 1:])
        nxt[~fg] = n
        if np.array_equal(nxt, lab):
            break
        lab = nxt
    roots = lab[fg]
    uniq = np.unique(roots)  # ascending == first-pixel scan order
    labels[fg] = np.searchsorted(uniq, roots).astype(np.int32) + 1
    areas = np.bincount(labels[fg], minlength=uniq.size + 1)[1:].astype(np.int64)
    return labels, areas


def confusion_counts(pred, truth):
    """Per-pixel (tp, fp, tn, fn) with foreground as the positive class."""
    p = pred != 0
    t = truth != 0
    tp = int(np.count_nonzero(p & t))
    fp = int(np.count_nonzero(p & ~t))
    fn = int(np.count_nonzero(~p & t))
    tn = p.size - tp - fp - fn
    return tp, fp, tn, fn


def resize_nearest_u8(src, out_h, out_w):
    """Nearest-neighbor resize of a 2D uint8 grid (pixel-center mapping)."""
    sh, sw = src.shape
    sy = ((np.arange(out_h, dtype=np.float64) + 0.5) * (sh / out_h)).astype(np.int64)
    sx = ((np.arange(out_w, dtype=np.float64) + 0.5) * (sw / out_w)).astype(np.int64)
    np.minimum(sy, sh - 1, out=sy)
    np.minimum(sx, sw - 1, out=sx)
    return np.ascontiguousarray(src[sy[:, None], sx[None, :]])


def resize_bilinear_rgb(src, out_h, out_w):
    """Bilinear resize of an (h, w, 3) uint8 image.

    Pixel-center sample points, edge-clamped, rounded half-up. Resizing to
    the source size reproduces it exactly.
    """
    sh, sw = src.shape[:2]
    sy = (np.arange(out_h, dtype=np.float64) + 0.5) * (sh / out_h) - 0.5
    sx = (np.arange(out_w, dtype=np.float64) + 0.5) * (sw / out_w) - 0.5
    np.clip(sy, 0.0, float(sh - 1), out=sy)
    np.clip(sx, 0.0, float(sw - 1), out=sx)
    y0f = np.floor(sy)
    x0f = np.floor(sx)
    wy = (sy - y0f)[:, None, None]
    wx = (sx - x0f)[None, :, None]
    y0 = y0f.astype(np.int64)
    x0 = x0f.astype(np.int64)
    y1 = np.minimum(y0 + 1, sh - 1)
    x1 = np.minimum(x0 + 1, sw - 1)
    v00 = src[np.ix_(y0, x0)].astype(np.float64)
    v01 = src[np.ix_(y0, x1)].astype(np.float64)
    v10 = src[np.ix_(y1, x0)].astype(np.float64)
    v11 = src[np.ix_(y1, x1)].astype(np.float64)
    top = v00 * (1.0 - wx) + v01 * wx
    bot = v10 * (1.0 - wx) + v11 * wx
    val = top * (1.0 - wy) + bot * wy
    return np.floor(val + 0.5).astype(np.uint8)
