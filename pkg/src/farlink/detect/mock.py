"""Reference external detector speaking the FDET/FRES protocol.

Serves the builtin color-keyed detector by default (so it doubles as a
protocol conformance fixture); a custom detect function and an
artificial per-request delay can be injected for fault testing.

Run standalone:  python -m farlink.detect.mock --port 9000 --delay-ms 0
"""
from __future__ import annotations

import argparse
import socket
import struct
import threading
import time
from typing import Callable, Sequence

from ..model import Detection, Frame
from ..wire import HEADER_LEN, decode_frame
from .builtin import detect_builtin
from .config import DetectorConfig
from .external import REQUEST_MAGIC, RESPONSE_MAGIC, _BOX

DetectFn = Callable[[Frame], Sequence[Detection]]


def _default_detect(frame: Frame) -> Sequence[Detection]:
    return detect_builtin(frame, DetectorConfig()).detections


def encode_response(request_id: int, detections: Sequence[Detection]) -> bytes:
    parts = [RESPONSE_MAGIC, struct.pack(">QH", request_id, len(detections))]
    for d in detections:
        parts.append(
            _BOX.pack(d.class_id, d.confidence, d.box.x, d.box.y, d.box.w, d.box.h)
        )
    return b"".join(parts)


class MockDetectorServer:
    def __init__(
        self,
        host: str = "127.0.0.1",
        port: int = 0,
        detect_fn: DetectFn | None = None,
        delay_s: float = 0.0,
    ):
        self._detect_fn = detect_fn or _default_detect
        self.delay_s = delay_s
        self._sock = socket.create_server((host, port))
        self._sock.settimeout(0.2)
        self.address: tuple[str, int] = self._sock.getsockname()[:2]
        self._stop = threading.Event()
        self._threads: list[threading.Thread] = []
        self._accept_thread: threading.Thread | None = None
        self.requests_served = 0

    def start(self) -> "MockDetectorServer":
        self._accept_thread = threading.Thread(
            target=self._accept_loop, name="mock-detector-accept", daemon=True
        )
        self._accept_thread.start()
        return self

    def _accept_loop(self) -> None:
        while not self._stop.is_set():
            try:
                conn, _ = self._sock.accept()
            except socket.timeout:
                continue
            except OSError:
                return
            t = threading.Thread(
                target=self._serve_conn, args=(conn,), daemon=True
            )
            t.start()
            self._threads.append(t)

    def _read_exact(self, conn: socket.socket, n: int) -> bytes | None:
        buf = bytearray()
        while len(buf) < n:
            if self._stop.is_set():
                return None
            try:
                chunk = conn.recv(n - len(buf))
            except socket.timeout:
                continue
            except OSError:
                return None
            if not chunk:
                return None
            buf.extend(chunk)
        return bytes(buf)

    def _serve_conn(self, conn: socket.socket) -> None:
        conn.settimeout(0.2)
        with conn:
            while not self._stop.is_set():
                head = self._read_exact(conn, 4 + 8 + HEADER_LEN)
                if head is None:
                    return
                if head[:4] != REQUEST_MAGIC:
                    return  # protocol violation: drop the connection
                (request_id,) = struct.unpack(">Q", head[4:12])
                (payload_len,) = struct.unpack(">I", head[4 + 8 + HEADER_LEN - 4 :])
                payload = self._read_exact(conn, payload_len)
                if payload is None:
                    return
                frame, _ = decode_frame(head[12:] + payload)
                if self.delay_s > 0:
                    time.sleep(self.delay_s)
                detections = self._detect_fn(frame)
                try:
                    conn.sendall(encode_response(request_id, detections))
                except OSError:
                    return
                self.requests_served += 1

    def stop(self) -> None:
        self._stop.set()
        self._sock.close()
        if self._accept_thread is not None:
            self._accept_thread.join(timeout=1.0)
        for t in self._threads:
            t.join(timeout=1.0)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description="Reference external detector")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=9000)
    parser.add_argument("--delay-ms", type=float, default=0.0)
    args = parser.parse_args(argv)
    server = MockDetectorServer(
        host=args.host, port=args.port, delay_s=args.delay_ms / 1000.0
    ).start()
    print(f"detector listening on {server.address[0]}:{server.address[1]}")
    try:
        while True:
            time.sleep(1.0)
    except KeyboardInterrupt:
        server.stop()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
