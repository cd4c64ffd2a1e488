"""Command-line entry point.

  farlink run       full ground station (pipeline + HTTP server)
  farlink simulate  synthetic cameras only, streamed to a remote ingest
                    endpoint (the on-board relay role)
  farlink bench     headless pipeline; prints one PipelineMetrics JSON
                    document to stdout after the run
  farlink record    render a seeded scene into a FARSEQ01 sequence file
  farlink play      stream a sequence file (to stdout or an endpoint)

Exit codes: 0 success, 1 usage error, 2 runtime failure. The listen port
resolves flag > config file > FLIGHTAR_PORT env > 8080.
"""
from __future__ import annotations

import argparse
import json
import os
import signal
import sys
import threading
import time
from dataclasses import replace

from .model import StreamId
from .pipeline import Pipeline, PipelineConfig, config_from_dict, parse_endpoint
from .detect import DetectorKind
from .server import DEFAULT_PORT, GroundStationServer
from .sim import (
    SourceConfig,
    play_sequence,
    record_sequence,
    send_frames,
    synthetic_frames,
)
from .util import BoundedQueue
from .wire import encode_frame


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parse_resolution(value: str) -> tuple[int, int]:
    try:
        w, h = value.lower().split("x")
        return int(w), int(h)
    except ValueError:
        raise UsageError(f"--resolution must be WxH, got {value!r}")


def build_parser() -> _Parser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", metavar="PATH", help="pipeline config JSON")
    shared.add_argument("--port", type=int, help=f"HTTP port (default {DEFAULT_PORT})")
    shared.add_argument("--seed", type=int, help="world seed (default 0)")
    shared.add_argument("--duration-s", type=float, help="run duration in seconds")
    shared.add_argument("--resolution", metavar="WxH", help="camera resolution (default 640x480)")
    shared.add_argument("--fps", type=float, help="camera frame rate (default 30)")
    shared.add_argument(
        "--detector", choices=["builtin", "external"], help="detector kind (default builtin)"
    )
    shared.add_argument(
        "--external-endpoint", metavar="HOST:PORT", help="external detector endpoint"
    )

    parser = _Parser(prog="farlink", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p_run = sub.add_parser("run", parents=[shared], help="full ground station")
    p_run.add_argument("--host", default="127.0.0.1")
    p_run.add_argument("--layout-path", default="layout.json")
    p_run.add_argument("--static-dir", default=None)

    p_sim = sub.add_parser("simulate", parents=[shared], help="cameras -> remote ingest")
    p_sim.add_argument("--connect", metavar="HOST:PORT", required=True)

    sub.add_parser("bench", parents=[shared], help="headless run, metrics JSON on stdout")

    p_rec = sub.add_parser("record", parents=[shared], help="scene -> sequence file")
    p_rec.add_argument("path")
    p_rec.add_argument("-n", "--frames", type=int, default=100)
    p_rec.add_argument("--camera", choices=[s.name for s in StreamId], default="FPV")

    p_play = sub.add_parser("play", parents=[shared], help="sequence file -> stream")
    p_play.add_argument("path")
    p_play.add_argument("--connect", metavar="HOST:PORT", default=None)

    return parser


def _load_config(args) -> tuple[PipelineConfig, dict]:
    """Config file + flag overrides; returns (config, raw file dict)."""
    raw: dict = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as f:
            raw = json.load(f)
    config = config_from_dict(raw)

    if args.seed is not None or args.resolution is not None or args.fps is not None:
        sources = {}
        for stream, src in config.sources.items():
            updates = {}
            if args.seed is not None:
                updates["seed"] = args.seed
            if args.resolution is not None:
                updates["resolution"] = _parse_resolution(args.resolution)
            if args.fps is not None:
                updates["frame_rate_hz"] = args.fps
            sources[stream] = replace(src, camera=stream, **updates)
        config = replace(config, sources=sources)

    if args.detector is not None or args.external_endpoint is not None:
        det = config.detector
        kind = det.kind
        endpoint = det.endpoint
        if args.external_endpoint is not None:
            endpoint = parse_endpoint(args.external_endpoint)
            kind = DetectorKind.EXTERNAL
        if args.detector is not None:
            kind = (
                DetectorKind.EXTERNAL
                if args.detector == "external"
                else DetectorKind.BUILTIN_CC
            )
        config = replace(
            config, detector=replace(det, kind=kind, endpoint=endpoint)
        )
    return config, raw


def _resolve_port(args, raw: dict) -> int:
    if getattr(args, "port", None) is not None:
        return args.port
    if "port" in raw:
        return int(raw["port"])
    env = os.environ.get("FLIGHTAR_PORT")
    if env:
        return int(env)
    return DEFAULT_PORT


def _source_config(args, camera: StreamId = StreamId.FPV) -> SourceConfig:
    return SourceConfig(
        camera=camera,
        resolution=_parse_resolution(args.resolution) if args.resolution else (640, 480),
        frame_rate_hz=args.fps if args.fps else 30.0,
        seed=args.seed if args.seed is not None else 0,
    )


def _install_signal_handlers(stop: threading.Event) -> None:
    def _on_signal(signum, _frame):
        stop.set()

    try:
        signal.signal(signal.SIGINT, _on_signal)
        signal.signal(signal.SIGTERM, _on_signal)
    except ValueError:  # not the main thread (embedded/test use)
        pass


# -- commands ------------------------------------------------------------------


def _cmd_run(args) -> int:
    config, raw = _load_config(args)
    pipeline = Pipeline(config).start()
    server = GroundStationServer(
        pipeline,
        host=args.host,
        port=_resolve_port(args, raw),
        layout_path=args.layout_path,
        static_dir=args.static_dir or raw.get("static_dir"),
    ).start()
    stop = threading.Event()
    _install_signal_handlers(stop)
    print(f"ground station on http://{server.address[0]}:{server.address[1]}", file=sys.stderr)
    try:
        if args.duration_s is not None:
            stop.wait(args.duration_s)
        else:
            while not stop.wait(0.2):
                pass
    finally:
        pipeline.stop()
        server.stop()
    return 0


def _cmd_simulate(args) -> int:
    endpoint = parse_endpoint(args.connect)
    config, _ = _load_config(args)
    stop = threading.Event()
    _install_signal_handlers(stop)
    queue = BoundedQueue(8)
    threads = []
    for stream, src in config.sources.items():
        max_frames = (
            round(args.duration_s * src.frame_rate_hz) if args.duration_s else None
        )

        def _produce(src=src, stream=stream, max_frames=max_frames):
            for frame in synthetic_frames(replace(src, camera=stream), stop, max_frames):
                queue.put(frame)

        t = threading.Thread(target=_produce, daemon=True)
        t.start()
        threads.append(t)

    def _frames():
        while True:
            frame = queue.get(timeout=0.2)
            if frame is None:
                if stop.is_set() or all(not t.is_alive() for t in threads):
                    return
                continue
            yield frame

    sent = send_frames(endpoint, _frames())
    print(f"sent {sent} frames to {endpoint[0]}:{endpoint[1]}", file=sys.stderr)
    return 0


def _cmd_bench(args) -> int:
    config, _ = _load_config(args)
    duration = args.duration_s if args.duration_s is not None else 10.0
    budgets = {
        stream: round(duration * src.frame_rate_hz)
        for stream, src in config.sources.items()
    }
    pipeline = Pipeline(config, max_frames_per_stream=budgets).start()
    time.sleep(duration)
    pipeline.wait_quiescent(budgets, timeout_s=2.0)
    pipeline.stop()
    print(json.dumps(pipeline.metrics_snapshot(), indent=2))
    return 0


def _cmd_record(args) -> int:
    config = _source_config(args, StreamId[args.camera])
    if args.frames < 0:
        raise UsageError("--frames must be >= 0")
    record_sequence(config, args.frames, args.path)
    print(f"recorded {args.frames} frames to {args.path}", file=sys.stderr)
    return 0


def _cmd_play(args) -> int:
    fps = args.fps if args.fps else 30.0
    if args.connect:
        endpoint = parse_endpoint(args.connect)
        sent = send_frames(endpoint, play_sequence(args.path, fps))
        print(f"sent {sent} frames to {endpoint[0]}:{endpoint[1]}", file=sys.stderr)
        return 0
    out = sys.stdout.buffer
    for frame in play_sequence(args.path, fps):
        out.write(encode_frame(frame))
    out.flush()
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"farlink: error: {e}", file=sys.stderr)
        return 1
    except SystemExit as e:  # --help
        return int(e.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        print("farlink: error: a command is required", file=sys.stderr)
        return 1
    handler = {
        "run": _cmd_run,
        "simulate": _cmd_simulate,
        "bench": _cmd_bench,
        "record": _cmd_record,
        "play": _cmd_play,
    }[args.command]
    try:
        return handler(args)
    except UsageError as e:
        print(f"farlink: error: {e}", file=sys.stderr)
        return 1
    except Exception as e:  # runtime failure -> exit 2 with diagnostic
        print(f"farlink: runtime failure: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
