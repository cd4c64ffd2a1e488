"""Operator pane layout: validation, JSON schema, file persistence.

Schema (docs/http-api.md): {"panes": [{"pane_id": str, "stream":
"FPV"|"BOTTOM", "x": f, "y": f, "w": f, "h": f, "z": int, "visible":
bool, "overlay_enabled": bool}, ...]} with unique pane_ids, w,h > 0 and
x+w <= 1, y+h <= 1.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass

from .model import StreamId


class LayoutError(ValueError):
    """Layout value rejected by validation (maps to HTTP 400)."""


class LayoutCorrupt(Exception):
    """Persisted layout file unreadable; callers fall back to the default."""


@dataclass(frozen=True)
class Pane:
    pane_id: str
    stream: StreamId
    x: float
    y: float
    w: float
    h: float
    z: int = 0
    visible: bool = True
    overlay_enabled: bool = False


@dataclass(frozen=True)
class PaneLayout:
    panes: tuple[Pane, ...]


DEFAULT_LAYOUT = PaneLayout(
    panes=(
        Pane("fpv", StreamId.FPV, 0.05, 0.1, 0.55, 0.8, z=0, overlay_enabled=True),
        Pane("bottom", StreamId.BOTTOM, 0.65, 0.3, 0.3, 0.4, z=1),
    )
)


def layout_from_dict(data: object) -> PaneLayout:
    """Parse and validate; raises LayoutError with a readable message."""
    if not isinstance(data, dict) or not isinstance(data.get("panes"), list):
        raise LayoutError("layout must be an object with a 'panes' list")
    panes = []
    seen_ids = set()
    for i, p in enumerate(data["panes"]):
        if not isinstance(p, dict):
            raise LayoutError(f"pane {i} must be an object")
        pane_id = p.get("pane_id")
        if not isinstance(pane_id, str) or not pane_id:
            raise LayoutError(f"pane {i}: pane_id must be a non-empty string")
        if pane_id in seen_ids:
            raise LayoutError(f"duplicate pane_id {pane_id!r}")
        seen_ids.add(pane_id)
        stream_name = p.get("stream")
        if stream_name not in StreamId.__members__:
            raise LayoutError(f"pane {pane_id!r}: unknown stream {stream_name!r}")
        try:
            x, y, w, h = (float(p[k]) for k in ("x", "y", "w", "h"))
        except (KeyError, TypeError, ValueError):
            raise LayoutError(f"pane {pane_id!r}: x, y, w, h must be numbers")
        if w <= 0 or h <= 0:
            raise LayoutError(f"pane {pane_id!r}: w and h must be > 0")
        if x < 0 or y < 0 or x + w > 1 or y + h > 1:
            raise LayoutError(
                f"pane {pane_id!r}: must lie inside the unit viewport "
                f"(x+w <= 1 and y+h <= 1)"
            )
        z = p.get("z", 0)
        if not isinstance(z, int) or isinstance(z, bool):
            raise LayoutError(f"pane {pane_id!r}: z must be an integer")
        visible = p.get("visible", True)
        overlay_enabled = p.get("overlay_enabled", False)
        if not isinstance(visible, bool) or not isinstance(overlay_enabled, bool):
            raise LayoutError(f"pane {pane_id!r}: visible/overlay_enabled must be booleans")
        panes.append(Pane(pane_id, StreamId[stream_name], x, y, w, h, z, visible, overlay_enabled))
    return PaneLayout(panes=tuple(panes))


def layout_to_dict(layout: PaneLayout) -> dict:
    return {
        "panes": [
            {
                "pane_id": p.pane_id,
                "stream": p.stream.name,
                "x": p.x,
                "y": p.y,
                "w": p.w,
                "h": p.h,
                "z": p.z,
                "visible": p.visible,
                "overlay_enabled": p.overlay_enabled,
            }
            for p in layout.panes
        ]
    }


def layout_store(layout: PaneLayout, path: str) -> None:
    layout_from_dict(layout_to_dict(layout))  # refuse to persist invalid state
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as f:
        json.dump(layout_to_dict(layout), f, indent=2)
    os.replace(tmp, path)


def layout_load(path: str) -> PaneLayout:
    """Missing file yields the documented default; unreadable or invalid
    content raises LayoutCorrupt."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except FileNotFoundError:
        return DEFAULT_LAYOUT
    except (OSError, json.JSONDecodeError) as e:
        raise LayoutCorrupt(f"{path}: {e}") from e
    try:
        return layout_from_dict(data)
    except LayoutError as e:
        raise LayoutCorrupt(f"{path}: {e}") from e
