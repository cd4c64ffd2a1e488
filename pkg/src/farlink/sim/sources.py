"""Frame sources: paced synthetic rendering, sequence files, network ingest.

Sequence file format ("FARSEQ01"): a 16-byte header (8-byte magic
"FARSEQ01" + frame count as big-endian u64) followed by that many FAR1
messages back to back.
"""
from __future__ import annotations

import socket
import struct
import threading
import time
from typing import Iterator

from ..model import Frame
from ..wire import StreamDecoder, encode_frame, decode_frame
from .render import render_camera
from .world import SourceConfig, initial_world, step_world

SEQ_MAGIC = b"FARSEQ01"
SEQ_HEADER_LEN = 16


class BadHeader(Exception):
    """Sequence file does not start with a valid FARSEQ01 header."""


def _sleep_until(deadline_ns: int, stop_event: threading.Event | None) -> bool:
    """Sleep until the monotonic deadline; False when stopped early."""
    while True:
        remaining = deadline_ns - time.monotonic_ns()
        if remaining <= 0:
            return True
        wait_s = min(remaining / 1e9, 0.02)
        if stop_event is not None:
            if stop_event.wait(wait_s):
                return False
        else:
            time.sleep(wait_s)


def synthetic_frames(
    config: SourceConfig,
    stop_event: threading.Event | None = None,
    max_frames: int | None = None,
) -> Iterator[Frame]:
    """Renders config.camera at config.frame_rate_hz against absolute
    deadlines (late wakeups do not change how many frames are emitted)."""
    world = initial_world(config)
    period_ns = round(1e9 / config.frame_rate_hz)
    t0 = time.monotonic_ns()
    n = 0
    while max_frames is None or n < max_frames:
        if not _sleep_until(t0 + n * period_ns, stop_event):
            return
        yield render_camera(
            world,
            config.camera,
            config.resolution,
            seq=n,
            capture_ts_ns=time.monotonic_ns(),
            noise_amplitude=config.noise_amplitude,
        )
        world = step_world(world)
        n += 1


def record_sequence(config: SourceConfig, n_frames: int, path: str) -> None:
    """Renders n_frames of config.camera to a FARSEQ01 file. Timestamps
    follow the nominal frame clock so identical configs give identical
    bytes."""
    world = initial_world(config)
    period_ns = round(1e9 / config.frame_rate_hz)
    with open(path, "wb") as f:
        f.write(SEQ_MAGIC + struct.pack(">Q", n_frames))
        for n in range(n_frames):
            frame = render_camera(
                world,
                config.camera,
                config.resolution,
                seq=n,
                capture_ts_ns=n * period_ns,
                noise_amplitude=config.noise_amplitude,
            )
            f.write(encode_frame(frame))
            world = step_world(world)


def read_sequence(path: str) -> list[Frame]:
    with open(path, "rb") as f:
        data = f.read()
    if len(data) < SEQ_HEADER_LEN or data[:8] != SEQ_MAGIC:
        raise BadHeader(f"{path}: not a FARSEQ01 file")
    (count,) = struct.unpack(">Q", data[8:16])
    frames = []
    offset = SEQ_HEADER_LEN
    for _ in range(count):
        frame, offset = decode_frame(data, offset)  # raises Truncated if short
        frames.append(frame)
    return frames


def play_sequence(
    path: str,
    frame_rate_hz: float,
    stop_event: threading.Event | None = None,
) -> Iterator[Frame]:
    """Yields the recorded frames at the requested pace, re-stamping
    capture_ts_ns at emission; seq values come from the file."""
    if frame_rate_hz <= 0:
        raise ValueError("frame_rate_hz must be > 0")
    frames = read_sequence(path)
    period_ns = round(1e9 / frame_rate_hz)
    t0 = time.monotonic_ns()
    for n, frame in enumerate(frames):
        if not _sleep_until(t0 + n * period_ns, stop_event):
            return
        yield Frame(
            stream_id=frame.stream_id,
            seq=frame.seq,
            capture_ts_ns=time.monotonic_ns(),
            width=frame.width,
            height=frame.height,
            payload=frame.payload,
        )


class IngestSource:
    """Listens for one byte-stream connection speaking concatenated FAR1
    messages. Garbage is skipped by scanning to the next magic; the skip
    count is exposed as resync_count."""

    def __init__(self, host: str = "127.0.0.1", port: int = 0):
        self._sock = socket.create_server((host, port))
        self._sock.settimeout(0.2)
        self.address: tuple[str, int] = self._sock.getsockname()[:2]
        self._decoder = StreamDecoder()
        self._stop = threading.Event()

    @property
    def resync_count(self) -> int:
        return self._decoder.resync_count

    def frames(self) -> Iterator[Frame]:
        conn = None
        try:
            while not self._stop.is_set():
                try:
                    conn, _ = self._sock.accept()
                    break
                except socket.timeout:
                    continue
                except OSError:
                    return
            if conn is None:
                return
            conn.settimeout(0.2)
            while not self._stop.is_set():
                try:
                    chunk = conn.recv(65536)
                except socket.timeout:
                    continue
                except OSError:
                    break
                if not chunk:
                    break
                yield from self._decoder.feed(chunk)
        finally:
            if conn is not None:
                conn.close()

    def close(self) -> None:
        self._stop.set()
        self._sock.close()


def send_frames(
    endpoint: tuple[str, int],
    frames: Iterator[Frame],
    connect_timeout_s: float = 5.0,
) -> int:
    """Connects to an ingest endpoint and streams encoded frames;
    returns the number sent. The on-board relay leg in two-process mode."""
    sent = 0
    with socket.create_connection(endpoint, timeout=connect_timeout_s) as sock:
        sock.settimeout(None)
        for frame in frames:
            sock.sendall(encode_frame(frame))
            sent += 1
    return sent
