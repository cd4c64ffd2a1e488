"""Pixel-labeling kernels with selectable backends.

The hot path is color keying + 4-connected component labeling. Two
implementations ship:

  - numba: fused keying/labeling in one JIT-compiled two-pass
    union-find over pixels, no intermediate mask (default when numba is
    importable)
  - numpy: vectorized channel-wise keying, then row-run labeling with a
    union-find over runs (pure numpy + a small python merge loop)

Backend selection: set FARLINK_KERNELS=numpy or FARLINK_KERNELS=numba;
unset (or "auto") prefers numba and silently falls back to numpy when
numba is unavailable.

Both backends return the exact same output: an int64 array of shape
(K, 5) with one row per component in raster order of the component's
first pixel: (min_row, min_col, max_row, max_col, area), bounds
inclusive. benchmarks/bench_kernels.py compares the two.
"""
from __future__ import annotations

import os

import numpy as np

_choice = os.environ.get("FARLINK_KERNELS", "auto").strip().lower()
if _choice not in ("auto", "numba", "numpy", ""):
    raise RuntimeError(
        f"FARLINK_KERNELS={_choice!r} not recognized (use 'numba' or 'numpy')"
    )

if _choice == "numpy":
    from ._numpy_impl import detect_boxes, label_boxes

    BACKEND = "numpy"
else:
    try:
        from ._numba_impl import detect_boxes, label_boxes

        BACKEND = "numba"
    except ImportError:
        if _choice == "numba":
            raise
        from ._numpy_impl import detect_boxes, label_boxes

        BACKEND = "numpy"


def active_backend() -> str:
    return BACKEND


def warmup() -> None:
    """Trigger JIT compilation ahead of the first timed frame."""
    label_boxes(np.zeros((4, 4), dtype=np.uint8))
    detect_boxes(np.zeros((4, 4, 3), dtype=np.uint8), (255, 0, 0), 0)


__all__ = ["detect_boxes", "label_boxes", "active_backend", "warmup", "BACKEND"]
