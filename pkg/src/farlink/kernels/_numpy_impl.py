"""Pure-numpy kernel: label row runs, then union-find over runs.

Runs are extracted vectorized (one diff over a padded mask); only the
run-merge loop is python, and the number of runs is tiny next to the
number of pixels for the scenes this pipeline labels.
"""
from __future__ import annotations

import numpy as np


def _find(parent: list[int], x: int) -> int:
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        parent[x], x = root, parent[x]
    return root


def binarize(
    rgb: np.ndarray, color: tuple[int, int, int], tolerance: int
) -> np.ndarray:
    """(H, W, 3) uint8 -> uint8 mask of pixels within tolerance of color.
    Channel-wise comparisons avoid promoting the whole array."""
    r, g, b = color
    if tolerance <= 0:
        mask = (rgb[:, :, 0] == r) & (rgb[:, :, 1] == g) & (rgb[:, :, 2] == b)
    else:
        lo = np.array([max(0, c - tolerance) for c in color], dtype=np.uint8)
        hi = np.array([min(255, c + tolerance) for c in color], dtype=np.uint8)
        mask = (
            (rgb[:, :, 0] >= lo[0]) & (rgb[:, :, 0] <= hi[0])
            & (rgb[:, :, 1] >= lo[1]) & (rgb[:, :, 1] <= hi[1])
            & (rgb[:, :, 2] >= lo[2]) & (rgb[:, :, 2] <= hi[2])
        )
    return mask.view(np.uint8)


def detect_boxes(
    rgb: np.ndarray, color: tuple[int, int, int], tolerance: int
) -> np.ndarray:
    return label_boxes(binarize(rgb, color, tolerance))


def label_boxes(mask: np.ndarray) -> np.ndarray:
    """(H, W) uint8 mask -> (K, 5) int64 rows of
    (min_row, min_col, max_row, max_col, area), raster order."""
    m = np.asarray(mask) != 0
    H, W = m.shape
    padded = np.zeros((H, W + 2), dtype=np.int8)
    padded[:, 1:-1] = m
    d = np.diff(padded, axis=1)
    srows, scols = np.nonzero(d == 1)  # run start columns (inclusive)
    _, ecols = np.nonzero(d == -1)  # run end columns (exclusive), row-aligned
    n_runs = len(srows)
    if n_runs == 0:
        return np.empty((0, 5), dtype=np.int64)

    # index of the first run of each row (runs are in raster order)
    row_first = np.searchsorted(srows, np.arange(H + 1))
    parent = list(range(n_runs))

    for r in range(1, H):
        i, i_end = row_first[r - 1], row_first[r]
        j, j_end = row_first[r], row_first[r + 1]
        while i < i_end and j < j_end:
            if ecols[i] <= scols[j]:
                i += 1
            elif ecols[j] <= scols[i]:
                j += 1
            else:
                ri, rj = _find(parent, i), _find(parent, j)
                if ri < rj:
                    parent[rj] = ri
                elif rj < ri:
                    parent[ri] = rj
                if ecols[i] <= ecols[j]:
                    i += 1
                else:
                    j += 1

    roots = [_find(parent, k) for k in range(n_runs)]
    order: dict[int, int] = {}
    for root in roots:
        if root not in order:
            order[root] = len(order)

    stats = np.empty((len(order), 5), dtype=np.int64)
    stats[:, 0] = H
    stats[:, 1] = W
    stats[:, 2] = -1
    stats[:, 3] = -1
    stats[:, 4] = 0
    for k in range(n_runs):
        c = order[roots[k]]
        r = srows[k]
        stats[c, 0] = min(stats[c, 0], r)
        stats[c, 1] = min(stats[c, 1], scols[k])
        stats[c, 2] = max(stats[c, 2], r)
        stats[c, 3] = max(stats[c, 3], ecols[k] - 1)
        stats[c, 4] += ecols[k] - scols[k]
    return stats
