"""Numba kernel: two-pass 4-connected labeling with union-find by min label.

Labels are created in raster order, and unions always keep the smaller
label as root, so the final roots in ascending order enumerate the
components in raster order of their first (top-left-most) pixel.
"""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@njit(cache=True, nogil=True)
def _label_boxes(mask):
    H, W = mask.shape
    labels = np.zeros((H, W), np.int32)
    # 4-connectivity admits at most one new label per two pixels in a row
    parent = np.zeros((H * W) // 2 + 2, np.int32)
    nxt = 1
    for i in range(H):
        for j in range(W):
            if mask[i, j] == 0:
                continue
            up = labels[i - 1, j] if i > 0 else 0
            left = labels[i, j - 1] if j > 0 else 0
            if up == 0 and left == 0:
                parent[nxt] = nxt
                labels[i, j] = nxt
                nxt += 1
            elif up == 0:
                labels[i, j] = _find(parent, left)
            elif left == 0:
                labels[i, j] = _find(parent, up)
            else:
                ru = _find(parent, up)
                rl = _find(parent, left)
                if ru < rl:
                    parent[rl] = ru
                    labels[i, j] = ru
                elif rl < ru:
                    parent[ru] = rl
                    labels[i, j] = rl
                else:
                    labels[i, j] = ru

    remap = np.zeros(nxt, np.int32)
    count = 0
    for lbl in range(1, nxt):
        if parent[lbl] == lbl:
            remap[lbl] = count
            count += 1

    stats = np.empty((count, 5), np.int64)
    for k in range(count):
        stats[k, 0] = H
        stats[k, 1] = W
        stats[k, 2] = -1
        stats[k, 3] = -1
        stats[k, 4] = 0
    for i in range(H):
        for j in range(W):
            lbl = labels[i, j]
            if lbl == 0:
                continue
            k = remap[_find(parent, lbl)]
            if i < stats[k, 0]:
                stats[k, 0] = i
            if j < stats[k, 1]:
                stats[k, 1] = j
            if i > stats[k, 2]:
                stats[k, 2] = i
            if j > stats[k, 3]:
                stats[k, 3] = j
            stats[k, 4] += 1
    return stats


@njit(cache=True, nogil=True)
def _detect_boxes(rgb, r, g, b, tol):
    """Fused color keying + labeling: one pass, no intermediate mask."""
    H, W = rgb.shape[0], rgb.shape[1]
    labels = np.zeros((H, W), np.int32)
    parent = np.zeros((H * W) // 2 + 2, np.int32)
    nxt = 1
    for i in range(H):
        for j in range(W):
            dr = np.int16(rgb[i, j, 0]) - r
            dg = np.int16(rgb[i, j, 1]) - g
            db = np.int16(rgb[i, j, 2]) - b
            if dr < -tol or dr > tol or dg < -tol or dg > tol or db < -tol or db > tol:
                continue
            up = labels[i - 1, j] if i > 0 else 0
            left = labels[i, j - 1] if j > 0 else 0
            if up == 0 and left == 0:
                parent[nxt] = nxt
                labels[i, j] = nxt
                nxt += 1
            elif up == 0:
                labels[i, j] = _find(parent, left)
            elif left == 0:
                labels[i, j] = _find(parent, up)
            else:
                ru = _find(parent, up)
                rl = _find(parent, left)
                if ru < rl:
                    parent[rl] = ru
                    labels[i, j] = ru
                elif rl < ru:
                    parent[ru] = rl
                    labels[i, j] = rl
                else:
                    labels[i, j] = ru

    remap = np.zeros(nxt, np.int32)
    count = 0
    for lbl in range(1, nxt):
        if parent[lbl] == lbl:
            remap[lbl] = count
            count += 1

    stats = np.empty((count, 5), np.int64)
    for k in range(count):
        stats[k, 0] = H
        stats[k, 1] = W
        stats[k, 2] = -1
        stats[k, 3] = -1
        stats[k, 4] = 0
    for i in range(H):
        for j in range(W):
            lbl = labels[i, j]
            if lbl == 0:
                continue
            k = remap[_find(parent, lbl)]
            if i < stats[k, 0]:
                stats[k, 0] = i
            if j < stats[k, 1]:
                stats[k, 1] = j
            if i > stats[k, 2]:
                stats[k, 2] = i
            if j > stats[k, 3]:
                stats[k, 3] = j
            stats[k, 4] += 1
    return stats


def label_boxes(mask: np.ndarray) -> np.ndarray:
    """(H, W) uint8 mask -> (K, 5) int64 rows of
    (min_row, min_col, max_row, max_col, area), raster order."""
    return _label_boxes(np.ascontiguousarray(mask, dtype=np.uint8))


def detect_boxes(
    rgb: np.ndarray, color: tuple[int, int, int], tolerance: int
) -> np.ndarray:
    """(H, W, 3) uint8 -> component boxes of pixels within tolerance of
    color, same output layout as label_boxes."""
    arr = np.ascontiguousarray(rgb, dtype=np.uint8)
    return _detect_boxes(
        arr,
        np.int16(color[0]),
        np.int16(color[1]),
        np.int16(color[2]),
        np.int16(tolerance),
    )
