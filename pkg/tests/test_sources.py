import socket
import threading
import time

import pytest

from farlink.model import StreamId
from farlink.sim import (
    BadHeader,
    IngestSource,
    SourceConfig,
    play_sequence,
    read_sequence,
    record_sequence,
    send_frames,
    synthetic_frames,
)
from farlink.sim.sources import SEQ_HEADER_LEN, SEQ_MAGIC
from farlink.wire import Truncated, encode_frame
from farlink.model import Frame


def test_record_zero_frames_is_header_only(tmp_path):
    path = tmp_path / "empty.farseq"
    record_sequence(SourceConfig(seed=1), 0, str(path))
    data = path.read_bytes()
    assert len(data) == SEQ_HEADER_LEN == 16
    assert data[:8] == SEQ_MAGIC


def test_record_file_size_formula(tmp_path):
    path = tmp_path / "tiny.farseq"
    cfg = SourceConfig(seed=1, resolution=(16, 16))
    record_sequence(cfg, 10, str(path))
    # 16-byte file header + 10 frames of (30-byte header + 16*16*3 payload)
    assert path.stat().st_size == 16 + 10 * (30 + 16 * 16 * 3)


def test_record_read_round_trip(tmp_path):
    path = tmp_path / "seq.farseq"
    cfg = SourceConfig(seed=42, resolution=(32, 24), camera=StreamId.BOTTOM)
    record_sequence(cfg, 7, str(path))
    frames = read_sequence(str(path))
    assert len(frames) == 7
    assert [f.seq for f in frames] == list(range(7))
    assert all(f.stream_id == StreamId.BOTTOM for f in frames)


def test_record_is_deterministic(tmp_path):
    a, b = tmp_path / "a.farseq", tmp_path / "b.farseq"
    cfg = SourceConfig(seed=7, resolution=(32, 24))
    record_sequence(cfg, 20, str(a))
    record_sequence(cfg, 20, str(b))
    assert a.read_bytes() == b.read_bytes()


def test_play_restamps_timestamps(tmp_path):
    path = tmp_path / "seq.farseq"
    record_sequence(SourceConfig(seed=3, resolution=(16, 16)), 5, str(path))
    before = time.monotonic_ns()
    frames = list(play_sequence(str(path), frame_rate_hz=2000))
    assert [f.seq for f in frames] == list(range(5))
    assert all(f.capture_ts_ns >= before for f in frames)
    # pixel payloads identical to the recording
    assert [f.payload for f in frames] == [f.payload for f in read_sequence(str(path))]


def test_play_bad_header(tmp_path):
    path = tmp_path / "junk.bin"
    path.write_bytes(b"NOTASEQ!" + bytes(8))
    with pytest.raises(BadHeader):
        read_sequence(str(path))


def test_play_truncated(tmp_path):
    path = tmp_path / "trunc.farseq"
    record_sequence(SourceConfig(seed=3, resolution=(16, 16)), 3, str(path))
    data = path.read_bytes()
    path.write_bytes(data[:-10])
    with pytest.raises(Truncated):
        read_sequence(str(path))


def test_synthetic_frames_budget_and_sequence():
    cfg = SourceConfig(seed=5, resolution=(16, 16), frame_rate_hz=500.0)
    frames = list(synthetic_frames(cfg, max_frames=12))
    assert [f.seq for f in frames] == list(range(12))
    assert all(f.stream_id == StreamId.FPV for f in frames)
    ts = [f.capture_ts_ns for f in frames]
    assert ts == sorted(ts)


def test_synthetic_stop_event_ends_stream():
    stop = threading.Event()
    cfg = SourceConfig(seed=5, resolution=(16, 16), frame_rate_hz=10.0)
    out = []

    def _consume():
        for f in synthetic_frames(cfg, stop_event=stop):
            out.append(f)

    t = threading.Thread(target=_consume)
    t.start()
    time.sleep(0.25)
    stop.set()
    t.join(timeout=1.0)
    assert not t.is_alive()
    assert 1 <= len(out) < 10


# -- network ingest -------------------------------------------------------------


def _send_raw(address, payload: bytes):
    with socket.create_connection(address) as sock:
        sock.sendall(payload)


def test_ingest_round_trip():
    src = IngestSource()
    cfg = SourceConfig(seed=2, resolution=(16, 16), frame_rate_hz=2000.0)
    frames = list(synthetic_frames(cfg, max_frames=5))
    sender = threading.Thread(
        target=send_frames, args=(src.address, iter(frames)), daemon=True
    )
    sender.start()
    received = list(src.frames())
    src.close()
    assert received == frames
    assert src.resync_count == 0


def test_ingest_resyncs_after_garbage_prefix():
    src = IngestSource()
    cfg = SourceConfig(seed=2, resolution=(16, 16), frame_rate_hz=2000.0)
    frames = list(synthetic_frames(cfg, max_frames=5))
    blob = b"\x00\x01\x02" + b"".join(encode_frame(f) for f in frames)
    sender = threading.Thread(target=_send_raw, args=(src.address, blob), daemon=True)
    sender.start()
    received = list(src.frames())
    src.close()
    assert received == frames
    assert src.resync_count == 1


def test_ingest_empty_connection_yields_nothing():
    src = IngestSource()
    sender = threading.Thread(target=_send_raw, args=(src.address, b""), daemon=True)
    sender.start()
    assert list(src.frames()) == []
    src.close()


def test_ingest_bind_failure_raises():
    src = IngestSource()
    with pytest.raises(OSError):
        IngestSource(src.address[0], src.address[1])
    src.close()


def test_ingest_of_recorded_sequence_is_identity(tmp_path):
    # ingest(record(x)) == x, timestamps re-stamped at play time
    path = tmp_path / "clip.farseq"
    cfg = SourceConfig(seed=8, resolution=(16, 16), camera=StreamId.BOTTOM)
    record_sequence(cfg, 6, str(path))
    recorded = read_sequence(str(path))
    src = IngestSource()
    sender = threading.Thread(
        target=send_frames,
        args=(src.address, play_sequence(str(path), 2000.0)),
        daemon=True,
    )
    sender.start()
    received = list(src.frames())
    src.close()
    assert [(f.seq, f.payload) for f in received] == [
        (f.seq, f.payload) for f in recorded
    ]
    assert src.resync_count == 0


def test_play_sequence_paces_frames(tmp_path):
    path = tmp_path / "clip.farseq"
    record_sequence(SourceConfig(seed=1, resolution=(16, 16)), 8, str(path))
    t0 = time.monotonic()
    assert len(list(play_sequence(str(path), frame_rate_hz=50.0))) == 8
    elapsed = time.monotonic() - t0
    assert elapsed >= 7 / 50.0  # deadlines at 0 .. 7/50 s
