"""Latest-wins inference scheduling: at most one inference in flight and
at most one pending frame per stream; a newer arrival replaces the
pending one (the detector is allowed to be slower than the camera
without growing unbounded lag)."""
from __future__ import annotations

import threading
import time
from enum import Enum

from ..model import DetectionResult, Frame
from .config import DetectorConfig


class Decision(Enum):
    START = "START"
    QUEUED = "QUEUED"
    REPLACED = "REPLACED"


class DetectionScheduler:
    def __init__(self):
        self._cond = threading.Condition()
        self._busy = False
        self._runnable: Frame | None = None
        self._in_flight: Frame | None = None
        self._pending: Frame | None = None
        self._last_result: DetectionResult | None = None
        self._closed = False
        self.offered_count = 0
        self.completed_count = 0
        self.skipped_count = 0
        self.failed_count = 0
        self.drained_count = 0

    def offer(self, frame: Frame) -> Decision:
        with self._cond:
            if self._closed:
                return Decision.REPLACED
            self.offered_count += 1
            if not self._busy:
                self._busy = True
                self._runnable = frame
                self._cond.notify()
                return Decision.START
            if self._pending is None:
                self._pending = frame
                return Decision.QUEUED
            self._pending = frame
            self.skipped_count += 1
            return Decision.REPLACED

    def take(self, timeout: float | None = None) -> Frame | None:
        """Blocks until a frame should run (worker side); None on timeout."""
        with self._cond:
            if timeout is None:
                while self._runnable is None and not self._closed:
                    self._cond.wait()
            else:
                deadline = time.monotonic() + timeout
                while self._runnable is None and not self._closed:
                    remaining = deadline - time.monotonic()
                    if remaining <= 0:
                        break
                    self._cond.wait(remaining)
            frame, self._runnable = self._runnable, None
            if frame is not None:
                self._in_flight = frame
            return frame

    def complete(self, result: DetectionResult) -> None:
        """Publish a result; the pending frame (if any) starts immediately."""
        with self._cond:
            self._in_flight = None
            if self._closed:
                return
            self._last_result = result
            self.completed_count += 1
            if self._pending is not None:
                self._runnable = self._pending
                self._pending = None
                self._cond.notify()
            else:
                self._busy = False

    def fail(self) -> None:
        """Abandon the in-flight frame (detector error); the pending frame,
        if any, still starts immediately."""
        with self._cond:
            self._in_flight = None
            if self._closed:
                return
            self.failed_count += 1
            if self._pending is not None:
                self._runnable = self._pending
                self._pending = None
                self._cond.notify()
            else:
                self._busy = False

    def current_overlay(self, frame: Frame, cfg: DetectorConfig) -> DetectionResult | None:
        """The freshest result, unless it is older than max_staleness_ms
        relative to the frame about to carry it (boundary inclusive)."""
        with self._cond:
            result = self._last_result
        if result is None:
            return None
        age_ns = frame.capture_ts_ns - result.produced_ts_ns
        if age_ns <= cfg.max_staleness_ms * 1_000_000:
            return result
        return None

    @property
    def last_result(self) -> DetectionResult | None:
        with self._cond:
            return self._last_result

    def drain(self) -> int:
        """Drop queued/in-flight work at shutdown; returns how many offered
        frames were abandoned (they count as dropped for conservation).
        Late complete() calls after drain are ignored."""
        with self._cond:
            self._closed = True
            dropped = self.drained_count = sum(
                1 for f in (self._pending, self._runnable, self._in_flight) if f is not None
            )
            self._pending = None
            self._runnable = None
            self._busy = False
            self._cond.notify_all()
            return dropped
