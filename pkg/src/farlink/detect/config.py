from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class DetectorKind(Enum):
    BUILTIN_CC = "BUILTIN_CC"
    EXTERNAL = "EXTERNAL"


@dataclass(frozen=True)
class DetectorConfig:
    kind: DetectorKind = DetectorKind.BUILTIN_CC
    target_color: tuple[int, int, int] = (255, 0, 0)
    color_tolerance: int = 0  # raise when source noise is enabled
    min_area_px: int = 16
    max_staleness_ms: int = 200
    endpoint: tuple[str, int] | None = None  # EXTERNAL kind
    timeout_ms: int = 1000

    def __post_init__(self):
        if self.min_area_px < 1:
            raise ValueError("min_area_px must be >= 1")
        if self.max_staleness_ms <= 0:
            raise ValueError("max_staleness_ms must be > 0")
        if self.kind == DetectorKind.EXTERNAL and self.endpoint is None:
            raise ValueError("EXTERNAL detector requires an endpoint")
