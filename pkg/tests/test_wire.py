import struct

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from farlink.model import Frame, StreamId
from farlink.wire import (
    HEADER_LEN,
    MAGIC,
    BadMagic,
    InvariantViolation,
    StreamDecoder,
    Truncated,
    decode_frame,
    encode_frame,
)


def make_frame(w=1, h=1, stream=StreamId.FPV, seq=0, ts=0, payload=None):
    payload = bytes(payload) if payload is not None else bytes(w * h * 3)
    return Frame(stream_id=stream, seq=seq, capture_ts_ns=ts, width=w, height=h, payload=payload)


def test_header_layout():
    f = make_frame(payload=[255, 0, 0])
    data = encode_frame(f)
    assert data[:4] == b"FAR1" == MAGIC
    assert HEADER_LEN == 30
    assert len(data) == HEADER_LEN + 3
    _, stream_id, seq, ts, w, h, fmt, plen = struct.unpack(">4sBQQHHBI", data[:30])
    assert (stream_id, seq, ts, w, h, fmt, plen) == (0, 0, 0, 1, 1, 0, 3)
    assert data[30:] == bytes([255, 0, 0])


def test_encoded_length_640x480():
    f = make_frame(w=640, h=480)
    assert len(encode_frame(f)) == HEADER_LEN + 640 * 480 * 3


def test_round_trip_identity():
    f = make_frame(w=3, h=2, stream=StreamId.BOTTOM, seq=77, ts=123456789, payload=range(18))
    decoded, consumed = decode_frame(encode_frame(f))
    assert decoded == f
    assert consumed == HEADER_LEN + 18


def test_bad_magic():
    with pytest.raises(BadMagic):
        decode_frame(b"\x00\x00" + bytes(40))


def test_truncated_header_and_payload():
    data = encode_frame(make_frame(w=2, h=2))
    with pytest.raises(Truncated):
        decode_frame(data[:10])
    with pytest.raises(Truncated):
        decode_frame(data[:-1])


def test_invariant_violation_payload_len():
    # valid header claiming payload_len=10 for a 1x1 frame
    header = struct.pack(">4sBQQHHBI", b"FAR1", 0, 0, 0, 1, 1, 0, 10)
    with pytest.raises(InvariantViolation):
        decode_frame(header + bytes(10))


def test_concatenation_framing():
    frames = [make_frame(seq=i, payload=[i, i, i]) for i in range(5)]
    blob = b"".join(encode_frame(f) for f in frames)
    out = []
    offset = 0
    while offset < len(blob):
        f, offset = decode_frame(blob, offset)
        out.append(f)
    assert out == frames


def test_stream_decoder_single_resync_for_garbage_gap():
    frames = [make_frame(seq=i) for i in range(5)]
    blob = encode_frame(frames[0]) + b"\x00\x01\x02" + b"".join(
        encode_frame(f) for f in frames[1:]
    )
    dec = StreamDecoder()
    got = []
    # feed byte by byte: the garbage gap must still count once
    for i in range(len(blob)):
        got.extend(dec.feed(blob[i : i + 1]))
    assert got == frames
    assert dec.resync_count == 1


def test_stream_decoder_no_resync_on_clean_stream():
    frames = [make_frame(seq=i, w=2, h=3) for i in range(10)]
    dec = StreamDecoder()
    got = dec.feed(b"".join(encode_frame(f) for f in frames))
    assert got == frames
    assert dec.resync_count == 0
    assert dec.pending_bytes == 0


frame_strategy = st.builds(
    make_frame,
    w=st.integers(1, 8),
    h=st.integers(1, 8),
    stream=st.sampled_from([StreamId.FPV, StreamId.BOTTOM]),
    seq=st.integers(0, 2**64 - 1),
    ts=st.integers(0, 2**64 - 1),
)


@given(st.lists(frame_strategy, min_size=0, max_size=6), st.data())
@settings(max_examples=60, deadline=None)
def test_random_chunking_round_trip(frames, data):
    frames = [
        Frame(
            stream_id=f.stream_id,
            seq=f.seq,
            capture_ts_ns=f.capture_ts_ns,
            width=f.width,
            height=f.height,
            payload=bytes(
                data.draw(
                    st.lists(
                        st.integers(0, 255),
                        min_size=f.width * f.height * 3,
                        max_size=f.width * f.height * 3,
                    )
                )
            ),
        )
        for f in frames
    ]
    blob = b"".join(encode_frame(f) for f in frames)
    dec = StreamDecoder()
    got = []
    pos = 0
    while pos < len(blob):
        cut = data.draw(st.integers(1, max(1, min(64, len(blob) - pos))))
        got.extend(dec.feed(blob[pos : pos + cut]))
        pos += cut
    assert got == frames
    assert dec.resync_count == 0
