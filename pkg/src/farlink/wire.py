"""FAR1 frame wire format.

Message layout (all integers big-endian):

    offset  size  field
    0       4     magic 0x46 0x41 0x52 0x31 ("FAR1")
    4       1     stream_id (0=FPV, 1=BOTTOM)
    5       8     seq
    13      8     capture_ts_ns
    21      2     width
    23      2     height
    25      1     pixel_format (0=RGB8)
    26      4     payload_len (= width*height*3)
    30      -     payload

Messages are self-delimiting and may be concatenated back to back on a
byte stream; see StreamDecoder for incremental decoding with resync.
"""
from __future__ import annotations

import struct

from .model import Frame, PixelFormat, StreamId

MAGIC = b"FAR1"
HEADER = struct.Struct(">4sBQQHHBI")
HEADER_LEN = HEADER.size  # 30


class WireError(Exception):
    pass


class BadMagic(WireError):
    """Bytes at the current offset are not a frame boundary."""


class Truncated(WireError):
    """Message extends past the available bytes; caller must buffer more."""


class InvariantViolation(WireError):
    """Header fields are internally inconsistent."""


def encode_frame(frame: Frame) -> bytes:
    header = HEADER.pack(
        MAGIC,
        int(frame.stream_id),
        frame.seq,
        frame.capture_ts_ns,
        frame.width,
        frame.height,
        int(frame.pixel_format),
        len(frame.payload),
    )
    return header + frame.payload


def decode_frame(data: bytes | memoryview, offset: int = 0) -> tuple[Frame, int]:
    """Decode one message starting at offset; returns (frame, next_offset)."""
    view = memoryview(data)
    try:
        remaining = len(view) - offset
        if remaining < len(MAGIC):
            if view[offset:] == MAGIC[:remaining]:
                raise Truncated("incomplete magic")
            raise BadMagic("not a frame boundary")
        if view[offset : offset + 4] != MAGIC:
            raise BadMagic("not a frame boundary")
        if remaining < HEADER_LEN:
            raise Truncated("incomplete header")
        _, stream_id, seq, ts, width, height, fmt, payload_len = HEADER.unpack_from(
            view, offset
        )
        if fmt != PixelFormat.RGB8:
            raise InvariantViolation(f"unknown pixel format {fmt}")
        if stream_id not in (StreamId.FPV, StreamId.BOTTOM):
            raise InvariantViolation(f"unknown stream id {stream_id}")
        if width < 1 or height < 1 or payload_len != width * height * 3:
            raise InvariantViolation(
                f"payload_len {payload_len} != {width}x{height}x3"
            )
        end = offset + HEADER_LEN + payload_len
        if len(view) < end:
            raise Truncated("incomplete payload")
        frame = Frame(
            stream_id=StreamId(stream_id),
            seq=seq,
            capture_ts_ns=ts,
            width=width,
            height=height,
            payload=bytes(view[offset + HEADER_LEN : end]),
        )
        return frame, end
    finally:
        # the caller may resize the underlying buffer right after an
        # exception; a lingering export (held via the traceback) would
        # forbid that
        view.release()


class StreamDecoder:
    """Incremental decoder for a byte stream of concatenated FAR1 messages.

    Feed arbitrary chunks; complete frames come out in order. On garbage
    (bad magic or an inconsistent header) the decoder scans forward to the
    next magic sequence and counts one resync per skipped gap.
    """

    def __init__(self):
        self._buf = bytearray()
        self.resync_count = 0
        self._in_gap = False

    def feed(self, chunk: bytes) -> list[Frame]:
        self._buf.extend(chunk)
        frames: list[Frame] = []
        while True:
            try:
                frame, consumed = decode_frame(self._buf)
            except Truncated:
                break
            except (BadMagic, InvariantViolation):
                if not self._skip_to_magic():
                    break
                continue
            frames.append(frame)
            del self._buf[:consumed]
            self._in_gap = False
        return frames

    def _skip_to_magic(self) -> bool:
        """Drop bytes up to the next magic past offset 0. Returns True if
        the buffer now starts with a complete magic. A contiguous garbage
        gap counts as a single resync even when it spans several chunks."""
        idx = self._buf.find(MAGIC, 1)
        if idx == -1:
            # keep a tail that could be a magic prefix split across chunks
            keep = 0
            for k in range(min(3, len(self._buf) - 1), 0, -1):
                if self._buf[-k:] == MAGIC[:k]:
                    keep = k
                    break
            skipped = len(self._buf) - keep
            del self._buf[: len(self._buf) - keep]
            if skipped and not self._in_gap:
                self.resync_count += 1
                self._in_gap = True
            return False
        del self._buf[:idx]
        if not self._in_gap:
            self.resync_count += 1
        self._in_gap = False
        return True

    @property
    def pending_bytes(self) -> int:
        return len(self._buf)
