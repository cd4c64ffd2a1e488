import time

from farlink.metrics import MetricsRegistry, percentile
from farlink.model import StreamId


def test_percentile_nearest_rank():
    values = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0]
    assert percentile(values, 0.50) == 5.0
    assert percentile(values, 0.95) == 10.0
    assert percentile(values, 0.0) == 1.0
    assert percentile([], 0.95) == 0.0
    assert percentile([7.5], 0.5) == 7.5


def make_registry():
    return MetricsRegistry([StreamId.FPV, StreamId.BOTTOM], window_s=10.0)


def test_snapshot_all_zero_at_start():
    snap = make_registry().snapshot()
    for s in ("FPV", "BOTTOM"):
        assert snap["streams"][s]["capture_fps"] == 0.0
        assert snap["streams"][s]["e2e_latency_ms"] == {"p50": 0.0, "p95": 0.0}
        for stage in snap["streams"][s]["stages"].values():
            assert stage == {"in": 0, "out": 0, "dropped": 0}
    assert snap["clients"] == {"active": 0, "dropped_parts": 0}


def test_counters_monotone_between_snapshots():
    reg = make_registry()
    prev = reg.snapshot()
    for i in range(30):
        reg.record_capture(StreamId.FPV)
        reg.record_composite_in(StreamId.FPV)
        now = time.monotonic_ns()
        reg.record_composite_out(StreamId.FPV, now - 5_000_000, now)
        if i % 3 == 0:
            snap = reg.snapshot()
            for s in ("FPV", "BOTTOM"):
                for name, stage in snap["streams"][s]["stages"].items():
                    for k in ("in", "out", "dropped"):
                        assert stage[k] >= prev["streams"][s]["stages"][name][k]
            prev = snap


def test_fps_uses_elapsed_time_not_full_window():
    reg = make_registry()
    reg.mark_start()
    for _ in range(20):
        reg.record_capture(StreamId.FPV)
    time.sleep(0.1)
    fps = reg.snapshot()["streams"]["FPV"]["capture_fps"]
    # 20 events over ~0.1 s elapsed: far more than 20/window
    assert fps > 50


def test_freeze_pins_snapshot_values():
    reg = make_registry()
    reg.record_capture(StreamId.FPV)
    reg.freeze()
    a = reg.snapshot()
    time.sleep(0.05)
    b = reg.snapshot()
    assert a == b


def test_latency_percentiles():
    reg = make_registry()
    reg.mark_start()
    base = time.monotonic_ns()
    for ms in (1, 2, 3, 4, 100):
        reg.record_composite_out(StreamId.FPV, base - ms * 1_000_000, base)
    lat = reg.snapshot()["streams"]["FPV"]["e2e_latency_ms"]
    assert lat["p50"] == 3.0
    assert lat["p95"] == 100.0
