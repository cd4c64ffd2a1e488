"""Broadcast fan-out from the pipeline to stream and metadata clients.

Encoded stream parts are produced once per active (codec, overlay)
variant and pushed to per-subscriber bounded queues (drop-oldest), so a
slow consumer can only ever lose its own parts.
"""
from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field

from .imgcodec import ImageCodec, encode_image
from .metrics import MetricsRegistry
from .model import Frame, StreamId
from .util import BoundedQueue

CLIENT_QUEUE_CAPACITY = 4
META_QUEUE_CAPACITY = 64


@dataclass(frozen=True)
class StreamPart:
    stream_id: StreamId
    seq: int
    capture_ts_ns: int
    content_type: str
    data: bytes


@dataclass
class Subscription:
    stream_id: StreamId
    codec: ImageCodec
    overlay: bool
    queue: BoundedQueue = field(default_factory=lambda: BoundedQueue(CLIENT_QUEUE_CAPACITY))

    @property
    def variant(self) -> tuple[StreamId, ImageCodec, bool]:
        return (self.stream_id, self.codec, self.overlay)


class StreamHub:
    """Per-variant lazy encoding: the default variant (JPEG + overlay) is
    always encoded so headless runs still measure end-to-end latency; other
    variants are encoded only while someone is subscribed."""

    def __init__(self, metrics: MetricsRegistry, default_codec: ImageCodec = ImageCodec.JPEG):
        self._lock = threading.Lock()
        self._subs: list[Subscription] = []
        self._metrics = metrics
        self._default_codec = default_codec

    def subscribe(self, stream_id: StreamId, codec: ImageCodec, overlay: bool) -> Subscription:
        sub = Subscription(stream_id, codec, overlay)
        with self._lock:
            self._subs.append(sub)
            self._metrics.set_clients_active(len(self._subs))
        return sub

    def unsubscribe(self, sub: Subscription) -> None:
        # per-part drops are recorded live in publish(); nothing to flush here
        with self._lock:
            if sub in self._subs:
                self._subs.remove(sub)
            self._metrics.set_clients_active(len(self._subs))
        sub.queue.close()

    def active_count(self) -> int:
        with self._lock:
            return len(self._subs)

    def publish(self, plain: Frame, overlaid: Frame) -> int:
        """Encode active variants of a composited frame and fan out.
        Returns the monotonic-ns time the default part became ready."""
        stream_id = plain.stream_id
        with self._lock:
            subs = [s for s in self._subs if s.stream_id == stream_id]
        variants: dict[tuple[ImageCodec, bool], StreamPart] = {}

        def part_for(codec: ImageCodec, overlay: bool) -> StreamPart:
            key = (codec, overlay)
            if key not in variants:
                frame = overlaid if overlay else plain
                variants[key] = StreamPart(
                    stream_id=stream_id,
                    seq=frame.seq,
                    capture_ts_ns=frame.capture_ts_ns,
                    content_type=codec.content_type,
                    data=encode_image(frame, codec),
                )
            return variants[key]

        part_for(self._default_codec, True)
        ready_ns = time.monotonic_ns()
        for sub in subs:
            dropped = sub.queue.put(part_for(sub.codec, sub.overlay))
            if dropped:
                self._metrics.record_client_drops(dropped)
        return ready_ns


class MetaHub:
    """Fan-out for /meta messages (NDJSON over HTTP); one publisher per
    kind keeps per-kind timestamps monotone."""

    def __init__(self):
        self._lock = threading.Lock()
        self._subs: list[BoundedQueue] = []
        self._last_ts: dict[str, int] = {}

    def subscribe(self) -> BoundedQueue:
        q = BoundedQueue(META_QUEUE_CAPACITY)
        with self._lock:
            self._subs.append(q)
        return q

    def unsubscribe(self, q: BoundedQueue) -> None:
        with self._lock:
            if q in self._subs:
                self._subs.remove(q)
        q.close()

    def publish(self, kind: str, payload: dict) -> None:
        with self._lock:
            ts = time.monotonic_ns()
            last = self._last_ts.get(kind)
            if last is not None and ts <= last:
                ts = last + 1
            self._last_ts[kind] = ts
            message = {"kind": kind, "ts_ns": ts, "payload": payload}
            subs = list(self._subs)
        for q in subs:
            q.put(message)
