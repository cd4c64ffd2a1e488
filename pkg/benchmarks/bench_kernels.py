"""Compare the numba and numpy labeling kernels on rendered frames.

Usage: python3 benchmarks/bench_kernels.py [--frames 200] [--resolution WxH]

The pipeline picks its backend via FARLINK_KERNELS (auto -> numba when
available); this script always times both implementations on identical
inputs and reports per-frame latency and the implied frame budget.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from farlink.kernels import _numba_impl, _numpy_impl
from farlink.model import StreamId
from farlink.sim import SourceConfig, initial_world, render_camera_array, step_world


def build_frames(n: int, resolution: tuple[int, int]) -> list[np.ndarray]:
    cfg = SourceConfig(seed=30, n_targets=10)
    world = initial_world(cfg)
    frames = []
    for i in range(n):
        which = StreamId.FPV if i % 2 == 0 else StreamId.BOTTOM
        frames.append(render_camera_array(world, which, resolution))
        world = step_world(world)
    return frames


def time_backend(name: str, detect_boxes, frames) -> float:
    detect_boxes(frames[0], (255, 0, 0), 0)  # JIT warmup / cache load
    t0 = time.perf_counter()
    boxes = 0
    for arr in frames:
        boxes += len(detect_boxes(arr, (255, 0, 0), 0))
    dt = time.perf_counter() - t0
    per_frame_ms = dt / len(frames) * 1000
    print(
        f"{name:>6}: {per_frame_ms:8.3f} ms/frame "
        f"({1000 / per_frame_ms:8.1f} fps ceiling, {boxes} boxes total)"
    )
    return per_frame_ms


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--frames", type=int, default=200)
    parser.add_argument("--resolution", default="640x480")
    args = parser.parse_args()
    w, h = (int(v) for v in args.resolution.lower().split("x"))

    print(f"rendering {args.frames} frames at {w}x{h} ...")
    frames = build_frames(args.frames, (w, h))

    numba_ms = time_backend("numba", _numba_impl.detect_boxes, frames)
    numpy_ms = time_backend("numpy", _numpy_impl.detect_boxes, frames)
    print(f" ratio: numpy/numba = {numpy_ms / numba_ms:.2f}x")

    # sanity: identical outputs on a sample
    for arr in frames[:: max(1, len(frames) // 10)]:
        a = _numba_impl.detect_boxes(arr, (255, 0, 0), 0)
        b = _numpy_impl.detect_boxes(arr, (255, 0, 0), 0)
        assert np.array_equal(a, b), "backends disagree"
    print("backends agree on sampled frames")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
