"""Sliding-window pipeline instrumentation.

Rates are events-per-second over the trailing window (capped by elapsed
run time, so a 2-second run still reads ~30 fps, not count/window).
Counters are cumulative and monotone. stop() freezes the clock so
post-run snapshots stay consistent.
"""
from __future__ import annotations

import math
import threading
import time
from collections import deque

from .model import StreamId

STAGES = ("capture", "composite", "detect")


class StageCounter:
    __slots__ = ("in_count", "out_count", "dropped_count")

    def __init__(self):
        self.in_count = 0
        self.out_count = 0
        self.dropped_count = 0

    def as_dict(self) -> dict:
        return {
            "in": self.in_count,
            "out": self.out_count,
            "dropped": self.dropped_count,
        }


class _EventWindow:
    def __init__(self):
        self.events: deque[int] = deque()

    def add(self, ts_ns: int) -> None:
        self.events.append(ts_ns)

    def prune(self, horizon_ns: int) -> None:
        while self.events and self.events[0] < horizon_ns:
            self.events.popleft()


def percentile(sorted_values: list[float], q: float) -> float:
    """Nearest-rank percentile; 0.0 on empty input."""
    if not sorted_values:
        return 0.0
    rank = max(1, math.ceil(q * len(sorted_values)))
    return sorted_values[rank - 1]


class _StreamMetrics:
    def __init__(self):
        self.capture = _EventWindow()
        self.composite = _EventWindow()
        self.detection = _EventWindow()
        self.latency: deque[tuple[int, float]] = deque()  # (ts_ns, ms)
        self.stages = {name: StageCounter() for name in STAGES}
        self.detector_skipped = 0


class MetricsRegistry:
    def __init__(self, streams: list[StreamId], window_s: float = 10.0):
        self._lock = threading.Lock()
        self.window_s = window_s
        self._streams = {s: _StreamMetrics() for s in streams}
        self._start_ns = time.monotonic_ns()
        self._frozen_ns: int | None = None
        self.client_dropped_parts = 0
        self.clients_active = 0

    def _now_ns(self) -> int:
        return self._frozen_ns if self._frozen_ns is not None else time.monotonic_ns()

    def mark_start(self) -> None:
        """Reset the rate-window origin (called once sources actually run,
        so startup work like JIT warmup does not dilute fps)."""
        with self._lock:
            self._start_ns = time.monotonic_ns()

    def freeze(self) -> None:
        with self._lock:
            if self._frozen_ns is None:
                self._frozen_ns = time.monotonic_ns()

    # -- recording ---------------------------------------------------------

    def stage(self, stream: StreamId, name: str) -> StageCounter:
        return self._streams[stream].stages[name]

    def record_capture(self, stream: StreamId) -> None:
        with self._lock:
            m = self._streams[stream]
            m.capture.add(time.monotonic_ns())
            m.stages["capture"].in_count += 1
            m.stages["capture"].out_count += 1

    def record_capture_drop(self, stream: StreamId) -> None:
        with self._lock:
            c = self._streams[stream].stages["capture"]
            c.in_count += 1
            c.dropped_count += 1

    def record_composite_in(self, stream: StreamId) -> None:
        with self._lock:
            self._streams[stream].stages["composite"].in_count += 1

    def record_composite_drop(self, stream: StreamId, n: int = 1) -> None:
        if n <= 0:
            return
        with self._lock:
            self._streams[stream].stages["composite"].dropped_count += n

    def record_composite_out(
        self, stream: StreamId, capture_ts_ns: int, ready_ns: int
    ) -> None:
        with self._lock:
            m = self._streams[stream]
            m.composite.add(ready_ns)
            m.stages["composite"].out_count += 1
            m.latency.append((ready_ns, (ready_ns - capture_ts_ns) / 1e6))

    def record_detect_in(self, stream: StreamId) -> None:
        with self._lock:
            self._streams[stream].stages["detect"].in_count += 1

    def record_detect_out(self, stream: StreamId) -> None:
        with self._lock:
            m = self._streams[stream]
            m.detection.add(time.monotonic_ns())
            m.stages["detect"].out_count += 1

    def record_detect_drop(self, stream: StreamId, n: int = 1) -> None:
        if n <= 0:
            return
        with self._lock:
            self._streams[stream].stages["detect"].dropped_count += n

    def set_detector_skipped(self, stream: StreamId, skipped: int) -> None:
        with self._lock:
            self._streams[stream].detector_skipped = skipped

    def record_client_drops(self, n: int) -> None:
        if n <= 0:
            return
        with self._lock:
            self.client_dropped_parts += n

    def set_clients_active(self, n: int) -> None:
        with self._lock:
            self.clients_active = n

    # -- reading -----------------------------------------------------------

    def snapshot(self) -> dict:
        with self._lock:
            now = self._now_ns()
            window_ns = int(self.window_s * 1e9)
            horizon = now - window_ns
            effective_s = min(self.window_s, max((now - self._start_ns) / 1e9, 1e-9))
            streams = {}
            for stream, m in self._streams.items():
                for w in (m.capture, m.composite, m.detection):
                    w.prune(horizon)
                while m.latency and m.latency[0][0] < horizon:
                    m.latency.popleft()
                lat = sorted(v for _, v in m.latency)
                streams[stream.name] = {
                    "capture_fps": len(m.capture.events) / effective_s,
                    "composite_fps": len(m.composite.events) / effective_s,
                    "detection_fps": len(m.detection.events) / effective_s,
                    "e2e_latency_ms": {
                        "p50": percentile(lat, 0.50),
                        "p95": percentile(lat, 0.95),
                    },
                    "stages": {n: c.as_dict() for n, c in m.stages.items()},
                    "detector_skipped": m.detector_skipped,
                }
            return {
                "window_s": self.window_s,
                "streams": streams,
                "clients": {
                    "active": self.clients_active,
                    "dropped_parts": self.client_dropped_parts,
                },
            }
