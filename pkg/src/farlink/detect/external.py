"""Client side of the detector wire protocol.

One byte-stream connection carries request/response pairs:

    request:  "FDET" + request_id (8 bytes BE) + one FAR1-encoded frame
    response: "FRES" + request_id (8 bytes BE) + box_count (2 bytes BE),
              then per box: class_id (2 bytes BE), confidence (f32 BE),
              x, y, w, h (f32 BE each, normalized)

This is the socket a neural detector (the heavy model on the ground
station GPU) sits behind; see docs/external-detector.md.
"""
from __future__ import annotations

import socket
import struct
import time

from ..model import BBox, Detection, DetectionResult, Frame
from ..wire import encode_frame

REQUEST_MAGIC = b"FDET"
RESPONSE_MAGIC = b"FRES"
_BOX = struct.Struct(">Hfffff")


class DetectorUnreachable(Exception):
    pass


class DetectorTimeout(Exception):
    pass


class MalformedResponse(Exception):
    pass


_F32_SLACK = 1e-5


def _sanitize_box(x: float, y: float, w: float, h: float) -> BBox:
    """Absorb f32 round-off from the wire (a legitimate x=0.3, w=0.7 can
    overshoot x+w=1 by ~1e-7); anything beyond the slack is malformed."""
    if x < 0 and x >= -_F32_SLACK:
        x = 0.0
    if y < 0 and y >= -_F32_SLACK:
        y = 0.0
    if x + w > 1.0 and x + w <= 1.0 + _F32_SLACK:
        w = 1.0 - x
    if y + h > 1.0 and y + h <= 1.0 + _F32_SLACK:
        h = 1.0 - y
    return BBox(x, y, w, h)


def _recv_exact(sock: socket.socket, n: int) -> bytes:
    buf = bytearray()
    while len(buf) < n:
        try:
            chunk = sock.recv(n - len(buf))
        except socket.timeout as e:
            raise DetectorTimeout("detector did not answer in time") from e
        if not chunk:
            raise MalformedResponse("connection closed mid-response")
        buf.extend(chunk)
    return bytes(buf)


class ExternalDetector:
    """Persistent-connection client; reconnects lazily after errors."""

    def __init__(self, endpoint: tuple[str, int], timeout_ms: int = 1000):
        self.endpoint = tuple(endpoint)
        self.timeout_s = timeout_ms / 1000.0
        self._sock: socket.socket | None = None
        self._next_request_id = 1

    def _connect(self) -> socket.socket:
        if self._sock is not None:
            return self._sock
        try:
            sock = socket.create_connection(self.endpoint, timeout=self.timeout_s)
        except OSError as e:
            raise DetectorUnreachable(f"cannot reach detector at {self.endpoint}") from e
        sock.settimeout(self.timeout_s)
        self._sock = sock
        return sock

    def _drop(self) -> None:
        if self._sock is not None:
            try:
                self._sock.close()
            except OSError:
                pass
            self._sock = None

    def detect(self, frame: Frame) -> DetectionResult:
        request_id = self._next_request_id
        self._next_request_id += 1
        t0 = time.perf_counter_ns()
        sock = self._connect()
        try:
            sock.sendall(
                REQUEST_MAGIC + struct.pack(">Q", request_id) + encode_frame(frame)
            )
            head = _recv_exact(sock, 14)
            if head[:4] != RESPONSE_MAGIC:
                raise MalformedResponse(f"bad response magic {head[:4]!r}")
            (rid,) = struct.unpack(">Q", head[4:12])
            if rid != request_id:
                raise MalformedResponse(f"response id {rid} != request id {request_id}")
            (count,) = struct.unpack(">H", head[12:14])
            body = _recv_exact(sock, count * _BOX.size)
        except (DetectorTimeout, MalformedResponse):
            self._drop()
            raise
        except OSError as e:
            self._drop()
            raise DetectorUnreachable("connection to detector lost") from e
        latency_ns = time.perf_counter_ns() - t0

        detections = []
        for i in range(count):
            class_id, conf, x, y, w, h = _BOX.unpack_from(body, i * _BOX.size)
            try:
                detections.append(
                    Detection(
                        class_id=class_id, confidence=conf, box=_sanitize_box(x, y, w, h)
                    )
                )
            except ValueError as e:
                raise MalformedResponse(f"invalid box in response: {e}") from e
        return DetectionResult(
            stream_id=frame.stream_id,
            source_seq=frame.seq,
            produced_ts_ns=time.monotonic_ns(),
            inference_latency_ns=latency_ns,
            detections=tuple(detections),
        )

    def close(self) -> None:
        self._drop()
