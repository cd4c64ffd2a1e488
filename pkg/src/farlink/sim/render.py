"""Orthographic camera rendering and exact ground-truth projection.

Both cameras image a fixed ground footprint (default 20 m x 15 m):

  - BOTTOM: centered on the drone, world +y pointing up in the image.
  - FPV: centered FPV_LOOKAHEAD_M ahead of the drone along its heading,
    rotated so the heading points up in the image.

Targets are billboarded: their axis-aligned metric rectangle is placed
around the transformed center, so every target is a filled axis-aligned
pixel rectangle of its exact color on the uniform gray background. A
pixel is painted iff its center falls inside the target rectangle
(half-open on the far edge), which makes the projected pixel rect an
exact oracle for pixel-level detectors.
"""
from __future__ import annotations

import math

import numpy as np

from ..model import BBox, Frame, StreamId
from .world import Target, WorldState

FOOTPRINT_M = (20.0, 15.0)
FPV_LOOKAHEAD_M = 8.0
BACKGROUND_RGB = (64, 64, 64)


def _camera_basis(
    world: WorldState, which: StreamId
) -> tuple[float, float, float, float]:
    """Returns (cx, cy, fx, fy): window center and image-up unit vector."""
    if which == StreamId.BOTTOM:
        return world.drone_pos[0], world.drone_pos[1], 0.0, 1.0
    fx, fy = math.cos(world.drone_heading), math.sin(world.drone_heading)
    return (
        world.drone_pos[0] + FPV_LOOKAHEAD_M * fx,
        world.drone_pos[1] + FPV_LOOKAHEAD_M * fy,
        fx,
        fy,
    )


def _span_to_pixels(a: float, b: float, n: int) -> tuple[int, int]:
    """Pixel indices whose centers lie in [a, b), clipped to [0, n)."""
    p0 = max(0, math.ceil(a - 0.5))
    p1 = min(n, math.ceil(b - 0.5))
    return p0, p1


def target_pixel_rect(
    target: Target,
    world: WorldState,
    which: StreamId,
    resolution: tuple[int, int],
    footprint: tuple[float, float] = FOOTPRINT_M,
) -> tuple[int, int, int, int] | None:
    """Clipped pixel rect (x0, y0, x1, y1), half-open; None when off-window."""
    W, H = resolution
    fw, fh = footprint
    cx, cy, fx, fy = _camera_basis(world, which)
    dx, dy = target.pos[0] - cx, target.pos[1] - cy
    u = dx * fy - dy * fx  # image right
    v = dx * fx + dy * fy  # image up
    hw, hh = target.size[0] / 2.0, target.size[1] / 2.0
    xa = (u - hw + fw / 2.0) / fw * W
    xb = (u + hw + fw / 2.0) / fw * W
    ya = (fh / 2.0 - (v + hh)) / fh * H
    yb = (fh / 2.0 - (v - hh)) / fh * H
    x0, x1 = _span_to_pixels(xa, xb, W)
    y0, y1 = _span_to_pixels(ya, yb, H)
    if x0 >= x1 or y0 >= y1:
        return None
    return x0, y0, x1, y1


def render_camera_array(
    world: WorldState,
    which: StreamId,
    resolution: tuple[int, int],
    footprint: tuple[float, float] = FOOTPRINT_M,
    noise_amplitude: int = 0,
) -> np.ndarray:
    W, H = resolution
    img = np.full((H, W, 3), BACKGROUND_RGB[0], dtype=np.uint8)  # uniform gray
    for t in world.targets:
        rect = target_pixel_rect(t, world, which, resolution, footprint)
        if rect is not None:
            x0, y0, x1, y1 = rect
            img[y0:y1, x0:x1] = t.color
    if noise_amplitude > 0:
        rng = np.random.default_rng(
            np.random.SeedSequence([world.seed, world.frame_index, int(which)])
        )
        delta = rng.integers(
            -noise_amplitude, noise_amplitude + 1, size=img.shape, dtype=np.int16
        )
        img = np.clip(img.astype(np.int16) + delta, 0, 255).astype(np.uint8)
    return img


def render_camera(
    world: WorldState,
    which: StreamId,
    resolution: tuple[int, int],
    seq: int,
    capture_ts_ns: int,
    footprint: tuple[float, float] = FOOTPRINT_M,
    noise_amplitude: int = 0,
) -> Frame:
    arr = render_camera_array(world, which, resolution, footprint, noise_amplitude)
    return Frame.from_array(arr, stream_id=which, seq=seq, capture_ts_ns=capture_ts_ns)


def ground_truth_boxes(
    world: WorldState,
    which: StreamId,
    resolution: tuple[int, int],
    footprint: tuple[float, float] = FOOTPRINT_M,
) -> list[tuple[int, BBox]]:
    """Exact normalized boxes of visible targets as (target_index, box)."""
    W, H = resolution
    out = []
    for i, t in enumerate(world.targets):
        rect = target_pixel_rect(t, world, which, resolution, footprint)
        if rect is None:
            continue
        x0, y0, x1, y1 = rect
        out.append((i, BBox(x0 / W, y0 / H, (x1 - x0) / W, (y1 - y0) / H)))
    return out
