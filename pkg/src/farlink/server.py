"""Ground-station HTTP serving layer.

Contract (docs/http-api.md):

  GET  /streams           JSON list of stream names
  GET  /stream/{id}       multipart/x-mixed-replace, boundary "frame";
                          query: codec=jpeg|png (default jpeg),
                          overlay=on|off (default on)
  GET  /meta              NDJSON push channel of MetaMessages
  GET  /layout            PaneLayout JSON
  PUT  /layout            store PaneLayout (400 + message when invalid)
  GET  /metrics           PipelineMetrics JSON
  GET  /                  operator console static assets

Each multipart part is framed exactly as:

  --frame\\r\\n
  Content-Type: image/jpeg\\r\\n
  Content-Length: {n}\\r\\n
  X-Frame-Seq: {seq}\\r\\n
  X-Capture-Ts-Ns: {ts}\\r\\n
  \\r\\n
  {n bytes}\\r\\n

Slow consumers are isolated behind per-client 4-part drop-oldest queues
and can never stall the pipeline.
"""
from __future__ import annotations

import json
import logging
import mimetypes
import socket
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from .imgcodec import ImageCodec
from .layout import (
    DEFAULT_LAYOUT,
    LayoutCorrupt,
    LayoutError,
    layout_from_dict,
    layout_load,
    layout_store,
    layout_to_dict,
)
from .model import StreamId
from .pipeline import Pipeline

logger = logging.getLogger(__name__)

DEFAULT_PORT = 8080
BOUNDARY = b"frame"

FALLBACK_PAGE = """<!doctype html>
<html><head><meta charset="utf-8"><title>farlink ground station</title>
<style>body{background:#111;color:#ddd;font-family:monospace}
img{border:1px solid #444;margin:8px;max-width:46%%}</style></head>
<body><h3>farlink ground station</h3>
<div>%s</div>
<p>Build the operator console (frontend/) for the full interface;
this fallback shows the raw streams.</p>
</body></html>
"""


class GroundStationServer:
    def __init__(
        self,
        pipeline: Pipeline,
        host: str = "127.0.0.1",
        port: int = DEFAULT_PORT,
        layout_path: str = "layout.json",
        static_dir: str | None = None,
    ):
        self.pipeline = pipeline
        self.layout_path = layout_path
        self.layout_recovered = False
        self._layout_lock = threading.Lock()
        try:
            self._layout = layout_load(layout_path)
        except LayoutCorrupt as e:
            logger.error("layout file corrupt, falling back to default: %s", e)
            self._layout = DEFAULT_LAYOUT
            self.layout_recovered = True
        if static_dir is None and Path("frontend/dist").is_dir():
            static_dir = "frontend/dist"
        self.static_dir = Path(static_dir).resolve() if static_dir else None
        self._httpd = ThreadingHTTPServer((host, port), _Handler)
        self._httpd.daemon_threads = True
        self._httpd.station = self  # type: ignore[attr-defined]
        self.address: tuple[str, int] = self._httpd.server_address[:2]
        self._thread: threading.Thread | None = None

    def start(self) -> "GroundStationServer":
        self._thread = threading.Thread(
            target=self._httpd.serve_forever, name="farlink-http", daemon=True
        )
        self._thread.start()
        return self

    def stop(self) -> None:
        self._httpd.shutdown()
        self._httpd.server_close()
        if self._thread is not None:
            self._thread.join(timeout=2.0)

    # -- layout store (single writer) ---------------------------------------

    def get_layout(self) -> dict:
        with self._layout_lock:
            return layout_to_dict(self._layout)

    def put_layout(self, data: object) -> dict:
        layout = layout_from_dict(data)  # raises LayoutError
        with self._layout_lock:
            layout_store(layout, self.layout_path)
            self._layout = layout
            return layout_to_dict(layout)


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    @property
    def station(self) -> GroundStationServer:
        return self.server.station  # type: ignore[attr-defined]

    def log_message(self, fmt, *args):
        logger.debug("%s %s", self.address_string(), fmt % args)

    # -- helpers -------------------------------------------------------------

    def _send_json(self, obj, status: int = 200) -> None:
        body = json.dumps(obj).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _send_error_json(self, status: int, message: str) -> None:
        self._send_json({"error": message}, status=status)

    # -- routes ---------------------------------------------------------------

    def do_GET(self):
        url = urlparse(self.path)
        query = parse_qs(url.query)
        route = url.path.rstrip("/") or "/"
        try:
            if route == "/streams":
                self._send_json([s.name for s in self.station.pipeline.streams])
            elif url.path.startswith("/stream/"):
                self._stream(url.path[len("/stream/") :], query)
            elif route == "/meta":
                self._meta()
            elif route == "/layout":
                self._send_json(self.station.get_layout())
            elif route == "/metrics":
                self._send_json(self.station.pipeline.metrics_snapshot())
            else:
                self._static(url.path)
        except (BrokenPipeError, ConnectionResetError):
            pass

    def do_PUT(self):
        url = urlparse(self.path)
        if url.path.rstrip("/") != "/layout":
            self._send_error_json(404, "not found")
            return
        length = self.headers.get("Content-Length")
        if length is None:
            self._send_error_json(411, "Content-Length required")
            return
        body = self.rfile.read(int(length))
        try:
            data = json.loads(body)
        except json.JSONDecodeError as e:
            self._send_error_json(400, f"invalid JSON: {e}")
            return
        try:
            stored = self.station.put_layout(data)
        except LayoutError as e:
            self._send_error_json(400, str(e))
            return
        self._send_json(stored)

    # -- streaming ------------------------------------------------------------

    def _stream(self, name: str, query: dict) -> None:
        if name not in StreamId.__members__ or StreamId[name] not in self.station.pipeline.streams:
            self._send_error_json(404, f"unknown stream {name!r}")
            return
        codec_name = query.get("codec", ["jpeg"])[0].lower()
        if codec_name not in ("jpeg", "png"):
            self._send_error_json(400, f"unsupported codec {codec_name!r}")
            return
        overlay = query.get("overlay", ["on"])[0].lower() != "off"
        pipeline = self.station.pipeline
        # bound kernel-side buffering so a stalled client drops frames at
        # the application queue instead of accumulating seconds of backlog
        self.connection.setsockopt(socket.SOL_SOCKET, socket.SO_SNDBUF, 16384)
        sub = pipeline.stream_hub.subscribe(
            StreamId[name], ImageCodec(codec_name), overlay
        )
        try:
            self.send_response(200)
            self.send_header(
                "Content-Type",
                f"multipart/x-mixed-replace; boundary={BOUNDARY.decode()}",
            )
            self.send_header("Cache-Control", "no-cache, private")
            self.end_headers()
            while True:
                part = sub.queue.get(timeout=0.5)
                if part is None:
                    if not pipeline.running:
                        break
                    continue
                self.wfile.write(
                    b"--" + BOUNDARY + b"\r\n"
                    b"Content-Type: " + part.content_type.encode() + b"\r\n"
                    b"Content-Length: " + str(len(part.data)).encode() + b"\r\n"
                    b"X-Frame-Seq: " + str(part.seq).encode() + b"\r\n"
                    b"X-Capture-Ts-Ns: " + str(part.capture_ts_ns).encode() + b"\r\n"
                    b"\r\n" + part.data + b"\r\n"
                )
                self.wfile.flush()
        finally:
            pipeline.stream_hub.unsubscribe(sub)

    def _meta(self) -> None:
        pipeline = self.station.pipeline
        q = pipeline.meta_hub.subscribe()
        try:
            self.send_response(200)
            self.send_header("Content-Type", "application/x-ndjson")
            self.send_header("Cache-Control", "no-cache, private")
            self.end_headers()
            while True:
                message = q.get(timeout=0.5)
                if message is None:
                    if not pipeline.running:
                        break
                    continue
                self.wfile.write(json.dumps(message).encode() + b"\n")
                self.wfile.flush()
        finally:
            pipeline.meta_hub.unsubscribe(q)

    # -- static assets ----------------------------------------------------------

    def _static(self, path: str) -> None:
        if path in ("/", "/index.html"):
            path = "/index.html"
        static_dir = self.station.static_dir
        if static_dir is not None:
            target = (static_dir / path.lstrip("/")).resolve()
            if target.is_file() and str(target).startswith(str(static_dir)):
                body = target.read_bytes()
                ctype = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
                self.send_response(200)
                self.send_header("Content-Type", ctype)
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)
                return
        if path == "/index.html":
            imgs = "".join(
                f'<img src="/stream/{s.name}" alt="{s.name}">'
                for s in self.station.pipeline.streams
            )
            body = (FALLBACK_PAGE % imgs).encode()
            self.send_response(200)
            self.send_header("Content-Type", "text/html; charset=utf-8")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)
            return
        self._send_error_json(404, "not found")
