"""Pipeline orchestration: sources -> detection tap -> compositing -> fan-out.

Every stage boundary is a bounded drop-oldest queue of immutable frames.
Detection is a side branch tapped at capture, never in the video path,
so the composited stream keeps pace with the camera regardless of
detector latency. Conservation holds per stage after stop():
in = out + dropped.
"""
from __future__ import annotations

import logging
import threading
import time
from dataclasses import dataclass, field, replace

from . import kernels
from .detect import (
    DetectionScheduler,
    DetectorConfig,
    DetectorKind,
    DetectorTimeout,
    DetectorUnreachable,
    ExternalDetector,
    MalformedResponse,
    detect_builtin,
)
from .hub import MetaHub, StreamHub
from .imgcodec import ImageCodec
from .metrics import MetricsRegistry
from .model import DetectionResult, Frame, StreamId
from .overlay import OverlayStyle, draw_overlay
from .sim import IngestSource, SourceConfig, SourceMode, play_sequence, synthetic_frames
from .util import BoundedQueue

logger = logging.getLogger(__name__)

METRICS_PUSH_INTERVAL_S = 0.5
STOP_BUDGET_S = 0.9


def default_sources(
    seed: int = 0,
    resolution: tuple[int, int] = (640, 480),
    frame_rate_hz: float = 30.0,
) -> dict[StreamId, SourceConfig]:
    """Both cameras viewing the same seeded world."""
    return {
        stream: SourceConfig(
            camera=stream,
            resolution=resolution,
            frame_rate_hz=frame_rate_hz,
            seed=seed,
        )
        for stream in (StreamId.FPV, StreamId.BOTTOM)
    }


@dataclass(frozen=True)
class PipelineConfig:
    sources: dict[StreamId, SourceConfig] = field(default_factory=default_sources)
    detector: DetectorConfig = field(default_factory=DetectorConfig)
    overlay: OverlayStyle = field(default_factory=OverlayStyle)
    detect_streams: frozenset[StreamId] = frozenset({StreamId.FPV})
    queue_capacity: int = 4
    metrics_window_s: float = 10.0
    stream_codec: ImageCodec = ImageCodec.JPEG

    def __post_init__(self):
        if self.queue_capacity < 1:
            raise ValueError("queue_capacity must be >= 1")
        if not self.sources:
            raise ValueError("at least one source stream is required")
        unknown = set(self.detect_streams) - set(self.sources)
        if unknown:
            raise ValueError(f"detect_streams not in sources: {unknown}")


class Pipeline:
    """Handle returned by run(); stop() drains and releases within 1 s."""

    def __init__(
        self,
        config: PipelineConfig,
        max_frames_per_stream: int | dict[StreamId, int] | None = None,
        composite_observer=None,
    ):
        self.config = config
        self.metrics = MetricsRegistry(list(config.sources), config.metrics_window_s)
        self.stream_hub = StreamHub(self.metrics, config.stream_codec)
        self.meta_hub = MetaHub()
        self._stop = threading.Event()
        self._threads: list[threading.Thread] = []
        self._worker_threads: list[threading.Thread] = []
        self._queues: dict[StreamId, BoundedQueue] = {}
        self.schedulers: dict[StreamId, DetectionScheduler] = {}
        self._external: dict[StreamId, ExternalDetector] = {}
        self._ingests: list[IngestSource] = []
        self._budgets = max_frames_per_stream
        self._observer = composite_observer
        self._started = False
        self._stopped = False

    # -- lifecycle -----------------------------------------------------------

    def start(self) -> "Pipeline":
        if self._started:
            raise RuntimeError("pipeline already started")
        self._started = True
        cfg = self.config

        for stream in cfg.detect_streams:
            self.schedulers[stream] = DetectionScheduler()
        if cfg.detect_streams:
            if cfg.detector.kind == DetectorKind.BUILTIN_CC:
                kernels.warmup()
            else:
                for stream in cfg.detect_streams:
                    client = ExternalDetector(cfg.detector.endpoint, cfg.detector.timeout_ms)
                    try:
                        client._connect()
                    except DetectorUnreachable as e:
                        raise RuntimeError(f"detector startup failed: {e}") from e
                    self._external[stream] = client

        for stream in cfg.sources:
            self._queues[stream] = BoundedQueue(cfg.queue_capacity)

        self.metrics.mark_start()
        self._spawn_sources()
        for stream in cfg.sources:
            self._spawn(f"composite-{stream.name}", self._run_composite, stream)
        for stream, sched in self.schedulers.items():
            t = self._spawn(f"detect-{stream.name}", self._run_detect, stream, sched)
            self._worker_threads.append(t)
        self._spawn("meta-ticker", self._run_meta_ticker)
        return self

    def stop(self) -> None:
        if not self._started or self._stopped:
            return
        self._stopped = True
        deadline = time.monotonic() + STOP_BUDGET_S
        self._stop.set()
        for ingest in self._ingests:
            ingest.close()
        for t in self._threads:
            if t not in self._worker_threads:
                t.join(max(0.05, deadline - time.monotonic()))
        for stream, q in self._queues.items():
            q.close()
            leftovers = len(q.drain())
            self.metrics.record_composite_drop(stream, leftovers)
        for t in self._worker_threads:
            t.join(max(0.05, deadline - time.monotonic()))
        for stream, sched in self.schedulers.items():
            self.metrics.record_detect_drop(stream, sched.drain())
        for client in self._external.values():
            client.close()
        self.metrics.freeze()

    @property
    def running(self) -> bool:
        return self._started and not self._stopped

    @property
    def streams(self) -> list[StreamId]:
        return list(self.config.sources)

    def metrics_snapshot(self) -> dict:
        snap = self.metrics.snapshot()
        for stream, sched in self.schedulers.items():
            entry = snap["streams"][stream.name]
            entry["detector_skipped"] = sched.skipped_count
            entry["stages"]["detect"]["dropped"] += sched.skipped_count
        return snap

    def wait_quiescent(self, budgets: dict[StreamId, int], timeout_s: float) -> bool:
        """Wait until every budgeted frame has been captured and flushed
        through compositing, and the detectors are idle. Used by bench so
        counters settle deterministically before stop()."""
        deadline = time.monotonic() + timeout_s
        while time.monotonic() < deadline:
            snap = self.metrics_snapshot()
            settled = True
            for stream, budget in budgets.items():
                stages = snap["streams"][stream.name]["stages"]
                if stages["capture"]["in"] < budget:
                    settled = False
                    break
                composite = stages["composite"]
                if composite["out"] + composite["dropped"] < composite["in"]:
                    settled = False
                    break
            if settled and all(
                sched.offered_count
                == sched.completed_count + sched.skipped_count + sched.failed_count
                for sched in self.schedulers.values()
            ):
                return True
            time.sleep(0.05)
        return False

    # -- stage threads ---------------------------------------------------------

    def _spawn(self, name, fn, *args) -> threading.Thread:
        t = threading.Thread(target=fn, args=args, name=f"farlink-{name}", daemon=True)
        self._threads.append(t)
        t.start()
        return t

    def _budget_for(self, stream: StreamId) -> int | None:
        if self._budgets is None:
            return None
        if isinstance(self._budgets, dict):
            return self._budgets.get(stream)
        return self._budgets

    def _spawn_sources(self) -> None:
        cfg = self.config
        file_groups: dict[str, list[StreamId]] = {}
        net_groups: dict[tuple[str, int], list[StreamId]] = {}
        for stream, src in cfg.sources.items():
            if src.mode == SourceMode.SYNTHETIC:
                self._spawn(f"source-{stream.name}", self._run_synthetic, stream, src)
            elif src.mode == SourceMode.FILE:
                if not src.path:
                    raise RuntimeError(f"{stream.name}: FILE source requires a path")
                file_groups.setdefault(src.path, []).append(stream)
            else:
                if not src.endpoint:
                    raise RuntimeError(f"{stream.name}: NETWORK source requires an endpoint")
                net_groups.setdefault(tuple(src.endpoint), []).append(stream)
        for path, streams in file_groups.items():
            rate = cfg.sources[streams[0]].frame_rate_hz
            self._spawn(f"source-file", self._run_file, path, rate, set(streams))
        for endpoint, streams in net_groups.items():
            ingest = IngestSource(endpoint[0], endpoint[1])  # bind errors abort start
            self._ingests.append(ingest)
            self._spawn(f"source-ingest", self._run_ingest, ingest, set(streams))

    def _admit(self, stream: StreamId, frame: Frame) -> None:
        self.metrics.record_capture(stream)
        evicted = self._queues[stream].put(frame)
        self.metrics.record_composite_in(stream)
        self.metrics.record_composite_drop(stream, evicted)
        sched = self.schedulers.get(stream)
        if sched is not None:
            self.metrics.record_detect_in(stream)
            sched.offer(frame)

    def _run_synthetic(self, stream: StreamId, src: SourceConfig) -> None:
        src = replace(src, camera=stream)
        for frame in synthetic_frames(src, self._stop, self._budget_for(stream)):
            self._admit(stream, frame)

    def _run_file(self, path: str, rate: float, streams: set[StreamId]) -> None:
        try:
            for frame in play_sequence(path, rate, self._stop):
                if frame.stream_id in streams:
                    self._admit(frame.stream_id, frame)
        except Exception as e:
            logger.error("file source %s failed: %s", path, e)

    def _run_ingest(self, ingest: IngestSource, streams: set[StreamId]) -> None:
        for frame in ingest.frames():
            if frame.stream_id in streams:
                self._admit(frame.stream_id, frame)

    def _run_composite(self, stream: StreamId) -> None:
        queue = self._queues[stream]
        sched = self.schedulers.get(stream)
        last_seq = -1
        while not self._stop.is_set():
            frame = queue.get(timeout=0.05)
            if frame is None:
                continue
            if frame.seq <= last_seq:
                self.metrics.record_composite_drop(stream, 1)
                continue
            last_seq = frame.seq
            result = (
                sched.current_overlay(frame, self.config.detector) if sched else None
            )
            overlaid = draw_overlay(frame, result, self.config.overlay)
            ready_ns = self.stream_hub.publish(frame, overlaid)
            self.metrics.record_composite_out(stream, frame.capture_ts_ns, ready_ns)
            if self._observer is not None:
                self._observer(frame, result)

    def _run_detect(self, stream: StreamId, sched: DetectionScheduler) -> None:
        cfg = self.config.detector
        client = self._external.get(stream)
        while not self._stop.is_set():
            frame = sched.take(timeout=0.1)
            if frame is None:
                continue
            try:
                if cfg.kind == DetectorKind.BUILTIN_CC:
                    result = detect_builtin(frame, cfg)
                else:
                    result = client.detect(frame)
            except (DetectorTimeout, DetectorUnreachable, MalformedResponse) as e:
                logger.warning("%s detector error on seq %d: %s", stream.name, frame.seq, e)
                sched.fail()
                self.metrics.record_detect_drop(stream, 1)
                continue
            sched.complete(result)
            self.metrics.record_detect_out(stream)
            if not self._stop.is_set():
                self.meta_hub.publish("DETECTIONS", detection_result_json(result))

    def _run_meta_ticker(self) -> None:
        while not self._stop.wait(METRICS_PUSH_INTERVAL_S):
            self.meta_hub.publish("METRICS", self.metrics_snapshot())


def parse_endpoint(value: str) -> tuple[str, int]:
    host, _, port = value.rpartition(":")
    if not host or not port.isdigit():
        raise ValueError(f"endpoint must be HOST:PORT, got {value!r}")
    return host, int(port)


def _source_to_dict(src: SourceConfig) -> dict:
    return {
        "mode": src.mode.value,
        "resolution": list(src.resolution),
        "frame_rate_hz": src.frame_rate_hz,
        "seed": src.seed,
        "n_targets": src.n_targets,
        "bounds": list(src.bounds),
        "noise_amplitude": src.noise_amplitude,
        "path": src.path,
        "endpoint": f"{src.endpoint[0]}:{src.endpoint[1]}" if src.endpoint else None,
    }


def _source_from_dict(stream: StreamId, data: dict) -> SourceConfig:
    endpoint = data.get("endpoint")
    return SourceConfig(
        mode=SourceMode(data.get("mode", "SYNTHETIC")),
        camera=stream,
        resolution=tuple(data.get("resolution", (640, 480))),
        frame_rate_hz=data.get("frame_rate_hz", 30.0),
        seed=data.get("seed", 0),
        n_targets=data.get("n_targets", 3),
        bounds=tuple(data.get("bounds", (100.0, 100.0))),
        noise_amplitude=data.get("noise_amplitude", 0),
        path=data.get("path"),
        endpoint=parse_endpoint(endpoint) if endpoint else None,
    )


def config_to_dict(config: PipelineConfig) -> dict:
    det = config.detector
    return {
        "streams": {s.name: _source_to_dict(src) for s, src in config.sources.items()},
        "detect_streams": [s.name for s in sorted(config.detect_streams)],
        "detector": {
            "kind": det.kind.value,
            "target_color": list(det.target_color),
            "color_tolerance": det.color_tolerance,
            "min_area_px": det.min_area_px,
            "max_staleness_ms": det.max_staleness_ms,
            "endpoint": f"{det.endpoint[0]}:{det.endpoint[1]}" if det.endpoint else None,
            "timeout_ms": det.timeout_ms,
        },
        "overlay": {
            "box_color": list(config.overlay.box_color),
            "border_px": config.overlay.border_px,
            "label_enabled": config.overlay.label_enabled,
        },
        "queue_capacity": config.queue_capacity,
        "metrics_window_s": config.metrics_window_s,
        "stream_codec": config.stream_codec.value,
    }


def config_from_dict(data: dict) -> PipelineConfig:
    streams_data = data.get("streams")
    if streams_data:
        sources = {
            StreamId[name]: _source_from_dict(StreamId[name], src)
            for name, src in streams_data.items()
        }
    else:
        sources = default_sources()
    det_data = data.get("detector", {})
    endpoint = det_data.get("endpoint")
    detector = DetectorConfig(
        kind=DetectorKind(det_data.get("kind", "BUILTIN_CC")),
        target_color=tuple(det_data.get("target_color", (255, 0, 0))),
        color_tolerance=det_data.get("color_tolerance", 0),
        min_area_px=det_data.get("min_area_px", 16),
        max_staleness_ms=det_data.get("max_staleness_ms", 200),
        endpoint=parse_endpoint(endpoint) if endpoint else None,
        timeout_ms=det_data.get("timeout_ms", 1000),
    )
    ov = data.get("overlay", {})
    overlay = OverlayStyle(
        box_color=tuple(ov.get("box_color", (0, 255, 0))),
        border_px=ov.get("border_px", 2),
        label_enabled=ov.get("label_enabled", True),
    )
    if "detect_streams" in data:
        detect_streams = frozenset(StreamId[name] for name in data["detect_streams"])
    else:
        detect_streams = frozenset({StreamId.FPV}) & set(sources)
    return PipelineConfig(
        sources=sources,
        detector=detector,
        overlay=overlay,
        detect_streams=detect_streams,
        queue_capacity=data.get("queue_capacity", 4),
        metrics_window_s=data.get("metrics_window_s", 10.0),
        stream_codec=ImageCodec(data.get("stream_codec", "jpeg")),
    )


def detection_result_json(result: DetectionResult) -> dict:
    return {
        "stream": result.stream_id.name,
        "source_seq": result.source_seq,
        "produced_ts_ns": result.produced_ts_ns,
        "inference_latency_ns": result.inference_latency_ns,
        "detections": [
            {
                "class_id": d.class_id,
                "confidence": d.confidence,
                "box": {"x": d.box.x, "y": d.box.y, "w": d.box.w, "h": d.box.h},
            }
            for d in result.detections
        ],
    }


def run(
    config: PipelineConfig,
    max_frames_per_stream: int | dict[StreamId, int] | None = None,
    composite_observer=None,
) -> Pipeline:
    """Start all stages; raises RuntimeError when a source or the external
    detector cannot be brought up."""
    return Pipeline(config, max_frames_per_stream, composite_observer).start()
