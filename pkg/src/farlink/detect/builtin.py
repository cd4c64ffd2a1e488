"""Color-keyed connected-component detector.

Pixels within color_tolerance of target_color (per channel) are
foreground; 4-connected components with area >= min_area_px become one
detection each, reported in raster order of the component's first pixel
with confidence fixed at 1.0. Pure function of the frame bytes.
"""
from __future__ import annotations

import time

from .. import kernels
from ..kernels._numpy_impl import binarize
from ..model import BBox, Detection, DetectionResult, Frame
from .config import DetectorConfig

__all__ = ["binarize", "detect_builtin"]


def detect_builtin(frame: Frame, cfg: DetectorConfig) -> DetectionResult:
    t0 = time.perf_counter_ns()
    stats = kernels.detect_boxes(frame.to_array(), cfg.target_color, cfg.color_tolerance)
    W, H = frame.width, frame.height
    detections = []
    for min_r, min_c, max_r, max_c, area in stats:
        if area < cfg.min_area_px:
            continue
        box = BBox(
            int(min_c) / W,
            int(min_r) / H,
            int(max_c - min_c + 1) / W,
            int(max_r - min_r + 1) / H,
        )
        detections.append(Detection(class_id=0, confidence=1.0, box=box))
    latency = time.perf_counter_ns() - t0
    return DetectionResult(
        stream_id=frame.stream_id,
        source_seq=frame.seq,
        produced_ts_ns=time.monotonic_ns(),
        inference_latency_ns=latency,
        detections=tuple(detections),
    )
