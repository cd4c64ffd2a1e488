"""Detection overlay compositing: box borders and confidence tags.

Labels use the 5x7 bitmap font below (one glyph per character, 1px
column spacing, 1px tag padding) so no font stack is needed and output
is byte-reproducible. The tag sits directly above the box, or directly
below it when the box touches the top edge; boxes spanning the full
frame height get no tag. Box-interior pixels are never touched.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import Detection, DetectionResult, Frame, bbox_to_pixels

GLYPH_W = 5
GLYPH_H = 7
TAG_PAD = 1
TAG_H = GLYPH_H + 2 * TAG_PAD

FONT_5X7 = {
    "0": (".###.", "#...#", "#..##", "#.#.#", "##..#", "#...#", ".###."),
    "1": ("..#..", ".##..", "..#..", "..#..", "..#..", "..#..", ".###."),
    "2": (".###.", "#...#", "....#", "...#.", "..#..", ".#...", "#####"),
    "3": ("#####", "...#.", "..#..", "...#.", "....#", "#...#", ".###."),
    "4": ("...#.", "..##.", ".#.#.", "#..#.", "#####", "...#.", "...#."),
    "5": ("#####", "#....", "####.", "....#", "....#", "#...#", ".###."),
    "6": ("..##.", ".#...", "#....", "####.", "#...#", "#...#", ".###."),
    "7": ("#####", "....#", "...#.", "..#..", ".#...", ".#...", ".#..."),
    "8": (".###.", "#...#", "#...#", ".###.", "#...#", "#...#", ".###."),
    "9": (".###.", "#...#", "#...#", ".####", "....#", "...#.", ".##.."),
    "P": ("####.", "#...#", "#...#", "####.", "#....", "#....", "#...."),
    "C": (".###.", "#...#", "#....", "#....", "#....", "#...#", ".###."),
    "%": ("##..#", "##..#", "...#.", "..#..", ".#...", "#..##", "#..##"),
    " ": (".....", ".....", ".....", ".....", ".....", ".....", "....."),
}


@dataclass(frozen=True)
class OverlayStyle:
    box_color: tuple[int, int, int] = (0, 255, 0)
    border_px: int = 2
    label_enabled: bool = True

    def __post_init__(self):
        if self.border_px < 1:
            raise ValueError("border_px must be >= 1")


def label_text(det: Detection) -> str:
    prefix = "P" if det.class_id == 0 else str(det.class_id)
    return f"{prefix} {round(det.confidence * 100)}%"


def tag_rect(
    det: Detection, width: int, height: int
) -> tuple[int, int, int, int] | None:
    """Pixel rect (x0, y0, w, h) the tag occupies, or None when it cannot
    be placed outside the box."""
    x0, y0, _, h = bbox_to_pixels(det.box, width, height)
    text = label_text(det)
    tag_w = len(text) * (GLYPH_W + 1) + 2 * TAG_PAD - 1
    if tag_w > width:
        return None
    if y0 >= TAG_H:
        ty = y0 - TAG_H
    elif y0 + h + TAG_H <= height:
        ty = y0 + h
    else:
        return None
    tx = min(max(x0, 0), width - tag_w)
    return tx, ty, tag_w, TAG_H


def _draw_tag(arr: np.ndarray, det: Detection, style: OverlayStyle) -> None:
    h, w = arr.shape[:2]
    rect = tag_rect(det, w, h)
    if rect is None:
        return
    tx, ty, tag_w, tag_h = rect
    arr[ty : ty + tag_h, tx : tx + tag_w] = (0, 0, 0)
    cx = tx + TAG_PAD
    cy = ty + TAG_PAD
    for ch in label_text(det):
        glyph = FONT_5X7.get(ch)
        if glyph is not None:
            for r, row in enumerate(glyph):
                for c, bit in enumerate(row):
                    if bit == "#":
                        arr[cy + r, cx + c] = style.box_color
        cx += GLYPH_W + 1


def draw_overlay(
    frame: Frame, result: DetectionResult | None, style: OverlayStyle
) -> Frame:
    if result is None or not result.detections:
        return frame
    arr = frame.to_array().copy()
    W, H = frame.width, frame.height
    t = style.border_px
    for det in result.detections:
        x0, y0, w, h = bbox_to_pixels(det.box, W, H)
        x1, y1 = x0 + w, y0 + h
        arr[y0 : min(y0 + t, y1), x0:x1] = style.box_color
        arr[max(y1 - t, y0) : y1, x0:x1] = style.box_color
        arr[y0:y1, x0 : min(x0 + t, x1)] = style.box_color
        arr[y0:y1, max(x1 - t, x0) : x1] = style.box_color
        if style.label_enabled:
            _draw_tag(arr, det, style)
    return Frame.from_array(
        arr, stream_id=frame.stream_id, seq=frame.seq, capture_ts_ns=frame.capture_ts_ns
    )
