"""Shared value types: frames, bounding boxes, detection results."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np


class StreamId(IntEnum):
    FPV = 0
    BOTTOM = 1


class PixelFormat(IntEnum):
    RGB8 = 0


@dataclass(frozen=True)
class Frame:
    """One camera image. Immutable; payload is row-major RGB8, no padding."""

    stream_id: StreamId
    seq: int
    capture_ts_ns: int
    width: int
    height: int
    payload: bytes
    pixel_format: PixelFormat = PixelFormat.RGB8

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError(f"frame dimensions must be >= 1, got {self.width}x{self.height}")
        if self.width > 0xFFFF or self.height > 0xFFFF:
            raise ValueError("frame dimensions exceed 16-bit range")
        if self.seq < 0 or self.capture_ts_ns < 0:
            raise ValueError("seq and capture_ts_ns must be non-negative")
        expected = self.width * self.height * 3
        if len(self.payload) != expected:
            raise ValueError(
                f"payload length {len(self.payload)} != width*height*3 = {expected}"
            )

    def to_array(self) -> np.ndarray:
        """Read-only (H, W, 3) uint8 view of the payload."""
        arr = np.frombuffer(self.payload, dtype=np.uint8).reshape(
            self.height, self.width, 3
        )
        arr.flags.writeable = False
        return arr

    @classmethod
    def from_array(
        cls,
        arr: np.ndarray,
        stream_id: StreamId,
        seq: int,
        capture_ts_ns: int,
    ) -> Frame:
        if arr.ndim != 3 or arr.shape[2] != 3 or arr.dtype != np.uint8:
            raise ValueError(f"expected (H, W, 3) uint8 array, got {arr.shape} {arr.dtype}")
        h, w = arr.shape[:2]
        return cls(
            stream_id=stream_id,
            seq=seq,
            capture_ts_ns=capture_ts_ns,
            width=w,
            height=h,
            payload=arr.tobytes(),
        )


@dataclass(frozen=True)
class BBox:
    """Axis-aligned box, normalized to [0,1] relative to frame size, origin top-left."""

    x: float
    y: float
    w: float
    h: float

    def __post_init__(self):
        if self.w <= 0 or self.h <= 0:
            raise ValueError(f"box size must be positive, got w={self.w} h={self.h}")
        if self.x < 0 or self.y < 0 or self.x + self.w > 1 + 1e-9 or self.y + self.h > 1 + 1e-9:
            raise ValueError(f"box ({self.x},{self.y},{self.w},{self.h}) outside [0,1]")


@dataclass(frozen=True)
class Detection:
    class_id: int
    confidence: float
    box: BBox

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence {self.confidence} outside [0,1]")
        if self.class_id < 0:
            raise ValueError("class_id must be non-negative")


@dataclass(frozen=True)
class DetectionResult:
    stream_id: StreamId
    source_seq: int
    produced_ts_ns: int
    inference_latency_ns: int
    detections: tuple[Detection, ...] = field(default_factory=tuple)


def bbox_to_pixels(box: BBox, width: int, height: int) -> tuple[int, int, int, int]:
    """Map a normalized box to an integer pixel rect (x0, y0, w, h).

    x0/y0 floor, w/h rounded half-up with a 1px minimum; the result is
    clamped to lie fully inside the frame.
    """
    x0 = int(math.floor(box.x * width))
    y0 = int(math.floor(box.y * height))
    w = max(1, int(math.floor(box.w * width + 0.5)))
    h = max(1, int(math.floor(box.h * height + 0.5)))
    x0 = min(max(x0, 0), width - 1)
    y0 = min(max(y0, 0), height - 1)
    w = min(w, width - x0)
    h = min(h, height - y0)
    return x0, y0, w, h


def bbox_iou(a: BBox, b: BBox) -> float:
    """Intersection-over-union of two normalized boxes; 0.0 when disjoint,
    exactly 1.0 for identical boxes."""
    if a == b:
        return 1.0
    ix0 = max(a.x, b.x)
    iy0 = max(a.y, b.y)
    ix1 = min(a.x + a.w, b.x + b.w)
    iy1 = min(a.y + a.h, b.y + b.h)
    iw = ix1 - ix0
    ih = iy1 - iy0
    if iw <= 0 or ih <= 0:
        return 0.0
    area_a = a.w * a.h
    area_b = b.w * b.h
    inter = min(iw * ih, area_a, area_b)  # guard float overshoot on near-ties
    return inter / (area_a + area_b - inter)
