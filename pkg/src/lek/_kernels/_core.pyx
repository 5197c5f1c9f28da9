# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled core for the per-pixel hot loops.

Bit-identical counterpart of ``_pure``; see that module for the shared
contracts. Keep the floating-point expressions in the resize kernels in
the exact shape used there, or the two backends drift apart.
"""

from libc.math cimport floor

import numpy as np

BACKEND = "compiled"


def fill_holes(const unsigned char[:, ::1] mask):
    cdef Py_ssize_t h = mask.shape[0]
    cdef Py_ssize_t w = mask.shape[1]
    out_arr = np.ones((h, w), dtype=np.uint8)
    if h == 0 or w == 0:
        return out_arr
    cdef unsigned char[:, ::1] out = out_arr
    seen_arr = np.zeros((h, w), dtype=np.uint8)
    cdef unsigned char[:, ::1] seen = seen_arr
    stack_arr = np.empty(h * w, dtype=np.intp)
    cdef Py_ssize_t[::1] stack = stack_arr
    cdef Py_ssize_t top = 0, i, j, p

    # seed with border background, then flood 4-connected
    for j in range(w):
        if mask[0, j] == 0 and seen[0, j] == 0:
            seen[0, j] = 1
            stack[top] = j
            top += 1
        if mask[h - 1, j] == 0 and seen[h - 1, j] == 0:
            seen[h - 1, j] = 1
            stack[top] = (h - 1) * w + j
            top += 1
    for i in range(h):
        if mask[i, 0] == 0 and seen[i, 0] == 0:
            seen[i, 0] = 1
            stack[top] = i * w
            top += 1
        if mask[i, w - 1] == 0 and seen[i, w - 1] == 0:
            seen[i, w - 1] = 1
            stack[top] = i * w + w - 1
            top += 1
    while top > 0:
        top -= 1
        p = stack[top]
        i = p // w
        j = p % w
        if i > 0 and mask[i - 1, j] == 0 and seen[i - 1, j] == 0:
            seen[i - 1, j] = 1
            stack[top] = p - w
            top += 1
        if i < h - 1 and mask[i + 1, j] == 0 and seen[i + 1, j] == 0:
            seen[i + 1, j] = 1
            stack[top] = p + w
            top += 1
        if j > 0 and mask[i, j - 1] == 0 and seen[i, j - 1] == 0:
            seen[i, j - 1] = 1
            stack[top] = p - 1
            top += 1
        if j < w - 1 and mask[i, j + 1] == 0 and seen[i, j + 1] == 0:
            seen[i, j + 1] = 1
            stack[top] = p + 1
            top += 1
    for i in range(h):
        for j in range(w):
            if seen[i, j]:
                out[i, j] = 0
    return out_arr


def label_components(const unsigned char[:, ::1] mask, int connectivity):
    if connectivity != 4 and connectivity != 8:
        raise ValueError("connectivity must be 4 or 8")
    cdef Py_ssize_t h = mask.shape[0]
    cdef Py_ssize_t w = mask.shape[1]
    labels_arr = np.zeros((h, w), dtype=np.int32)
    if h == 0 or w == 0:
        return labels_arr, np.zeros(0, dtype=np.int64)
    cdef int[:, ::1] labels = labels_arr
    stack_arr = np.empty(h * w, dtype=np.intp)
    cdef Py_ssize_t[::1] stack = stack_arr
    cdef Py_ssize_t[8] di, dj
    cdef int n_off = connectivity
    di[0] = -1; dj[0] = 0
    di[1] = 1; dj[1] = 0
    di[2] = 0; dj[2] = -1
    di[3] = 0; dj[3] = 1
    di[4] = -1; dj[4] = -1
    di[5] = -1; dj[5] = 1
    di[6] = 1; dj[6] = -1
    di[7] = 1; dj[7] = 1
    areas = []
    cdef Py_ssize_t top, i, j, p, ni, nj, area
    cdef int k, cur = 0
    for i in range(h):
        for j in range(w):
            if mask[i, j] != 0 and labels[i, j] == 0:
                cur += 1
                labels[i, j] = cur
                stack[0] = i * w + j
                top = 1
                area = 0
                while top > 0:
                    top -= 1
                    p = stack[top]
                    area += 1
                    for k in range(n_off):
                        ni = p // w + di[k]
                        nj = p % w + dj[k]
                        if 0 <= ni < h and 0 <= nj < w:
                            if mask[ni, nj] != 0 and labels[ni, nj] == 0:
                                labels[ni, nj] = cur
                                stack[top] = ni * w + nj
                                top += 1
                areas.append(area)
    return labels_arr, np.asarray(areas, dtype=np.int64)


def confusion_counts(const unsigned char[:, ::1] pred,
                     const unsigned char[:, ::1] truth):
    cdef Py_ssize_t h = pred.shape[0]
    cdef Py_ssize_t w = pred.shape[1]
    cdef long long tp = 0, fp = 0, tn = 0, fn = 0
    cdef Py_ssize_t i, j
    for i in range(h):
        for j in range(w):
            if pred[i, j] != 0:
                if truth[i, j] != 0:
                    tp += 1
                else:
                    fp += 1
            else:
                if truth[i, j] != 0:
                    fn += 1
                else:
                    tn += 1
    return int(tp), int(fp), int(tn), int(fn)


def resize_nearest_u8(const unsigned char[:, ::1] src,
                      Py_ssize_t out_h, Py_ssize_t out_w):
    cdef Py_ssize_t sh = src.shape[0]
    cdef Py_ssize_t sw = src.shape[1]
    out_arr = np.empty((out_h, out_w), dtype=np.uint8)
    cdef unsigned char[:, ::1] out = out_arr
    cdef double scale_y = sh / (<double> out_h)
    cdef double scale_x = sw / (<double> out_w)
    cdef Py_ssize_t oy, ox, sy, sx
    for oy in range(out_h):
        sy = <Py_ssize_t> ((oy + 0.5) * scale_y)
        if sy > sh - 1:
            sy = sh - 1
        for ox in range(out_w):
            sx = <Py_ssize_t> ((ox + 0.5) * scale_x)
            if sx > sw - 1:
                sx = sw - 1
            out[oy, ox] = src[sy, sx]
    return out_arr


def resize_bilinear_rgb(const unsigned char[:, :, ::1] src,
                        Py_ssize_t out_h, Py_ssize_t out_w):
    cdef Py_ssize_t sh = src.shape[0]
    cdef Py_ssize_t sw = src.shape[1]
    out_arr = np.empty((out_h, out_w, 3), dtype=np.uint8)
    cdef unsigned char[:, :, ::1] out = out_arr
    cdef double scale_y = sh / (<double> out_h)
    cdef double scale_x = sw / (<double> out_w)
    cdef double sy, sx, wy, wx, v00, v01, v10, v11, top, bot, val
    cdef Py_ssize_t oy, ox, y0, y1, x0, x1, c
    for oy in range(out_h):
        sy = (oy + 0.5) * scale_y - 0.5
        if sy < 0.0:
            sy = 0.0
        elif sy > sh - 1.0:
            sy = sh - 1.0
        y0 = <Py_ssize_t> floor(sy)
        wy = sy - floor(sy)
        y1 = y0 + 1
        if y1 > sh - 1:
            y1 = sh - 1
        for ox in range(out_w):
            sx = (ox + 0.5) * scale_x - 0.5
            if sx < 0.0:
                sx = 0.0
            elif sx > sw - 1.0:
                sx = sw - 1.0
            x0 = <Py_ssize_t> floor(sx)
            wx = sx - floor(sx)
            x1 = x0 + 1
            if x1 > sw - 1:
                x1 = sw - 1
            for c in range(3):
                v00 = src[y0, x0, c]
                v01 = src[y0, x1, c]
                v10 = src[y1, x0, c]
                v11 = src[y1, x1, c]
                top = v00 * (1.0 - wx) + v01 * wx
                bot = v10 * (1.0 - wx) + v11 * wx
                val = top * (1.0 - wy) + bot * wy
                out[oy, ox, c] = <unsigned char> floor(val + 0.5)
    return out_arr
