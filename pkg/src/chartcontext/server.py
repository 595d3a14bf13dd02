"""HTTP service for the browser UI: serves the chart bundle, computes
overlay layouts, and ingests session logs and trace lines.

Layout requests are stateless and pure (the UI may instead embed its own
engine; both must produce identical documents).  Trace ingestion is
serialized per target file; everything else handles concurrent requests
freely.
"""

from __future__ import annotations

import json
import re
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from .bundle import BundleManifest
from .geometry import Rect
from .overlay import (
    MinimapSettings,
    OverlaySettings,
    SettingsError,
    layout_dynamic_context,
    layout_minimap,
    layout_to_dict,
    settings_from_dict,
)
from .quiz import assign_order
from .tracelog import _ID_RE


class ServiceError(Exception):
    def __init__(self, status: int, message: str):
        self.status = status
        self.message = message
        super().__init__(message)


def compute_layout(manifest: BundleManifest, request: dict) -> dict:
    """Layout document for one (method, chart, pointer, settings) request."""
    method = request.get("method", "dynamic-context")
    chart_id = request.get("chart_id")
    if chart_id not in manifest.charts:
        raise ServiceError(404, f"unknown chart_id {chart_id!r}")
    annotation = manifest.charts[chart_id].annotation

    pointer = request.get("pointer")
    if (
        not isinstance(pointer, (list, tuple))
        or len(pointer) != 2
        or not all(isinstance(v, (int, float)) for v in pointer)
    ):
        raise ServiceError(400, "pointer must be [x, y]")
    chart_rect = Rect.from_seq(request.get("chart_rect", [0.0, 0.0, 1.0, 1.0]))

    settings_doc = request.get("settings", {})
    try:
        if method == "dynamic-context":
            settings = settings_from_dict(settings_doc, "dynamic-context") if settings_doc else OverlaySettings()
            layout = layout_dynamic_context((pointer[0], pointer[1]), settings, annotation, chart_rect)
        elif method == "mini-map":
            settings = settings_from_dict(settings_doc, "mini-map") if settings_doc else MinimapSettings()
            layout = layout_minimap((pointer[0], pointer[1]), settings, annotation, chart_rect)
        else:
            raise ServiceError(400, f"unknown method {method!r}")
    except SettingsError as exc:
        raise ServiceError(400, str(exc)) from exc
    return layout_to_dict(layout)


class StudyStore:
    """Flat-file persistence for sessions and traces under one directory."""

    def __init__(self, data_dir):
        self.root = Path(data_dir)
        (self.root / "sessions").mkdir(parents=True, exist_ok=True)
        (self.root / "traces").mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _lock_for(self, name: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(name, threading.Lock())

    @staticmethod
    def _require_id(doc: dict, key: str) -> str:
        value = str(doc.get(key, ""))
        if not _ID_RE.match(value):
            raise ServiceError(400, f"{key} missing or not filename-safe")
        return value

    def save_session(self, doc: dict) -> Path:
        pid = self._require_id(doc, "participant_id")
        condition = self._require_id(doc, "condition")
        variant = self._require_id(doc, "variant_tag")
        if "records" not in doc or not isinstance(doc["records"], list):
            raise ServiceError(400, "session document needs a records array")
        name = f"P{pid}_{condition}_{variant}.session.json"
        path = self.root / "sessions" / name
        with self._lock_for(name):
            path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return path

    def append_trace(self, doc: dict) -> tuple[Path, int]:
        pid = self._require_id(doc, "participant_id")
        condition = self._require_id(doc, "condition")
        variant = self._require_id(doc, "variant_tag")
        qid = self._require_id(doc, "question_id")
        lines = doc.get("lines")
        if not isinstance(lines, list) or not all(isinstance(l, str) for l in lines):
            raise ServiceError(400, "trace upload needs a lines array of strings")
        name = f"P{pid}_{condition}_{variant}_{qid}.trace"
        path = self.root / "traces" / name
        with self._lock_for(name):
            with open(path, "a", encoding="utf-8") as fh:
                for line in lines:
                    fh.write(line.rstrip("\n") + "\n")
        return path, len(lines)


_CHART_RE = re.compile(r"^/charts/([A-Za-z0-9.-]+)(/annotation)?$")


class _Handler(BaseHTTPRequestHandler):
    # set by make_server
    manifest: BundleManifest
    store: StudyStore

    protocol_version = "HTTP/1.1"

    def log_message(self, *args):  # quiet by default; tests capture responses
        pass

    def _send(self, status: int, payload: bytes, content_type: str) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(payload)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.end_headers()
        self.wfile.write(payload)

    def _send_json(self, status: int, doc) -> None:
        self._send(status, json.dumps(doc).encode("utf-8"), "application/json")

    def _fail(self, status: int, message: str) -> None:
        self._send_json(status, {"error": message})

    def _read_json(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        if length <= 0:
            raise ServiceError(400, "missing request body")
        try:
            doc = json.loads(self.rfile.read(length).decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ServiceError(400, f"malformed JSON body: {exc}") from exc
        if not isinstance(doc, dict):
            raise ServiceError(400, "body must be a JSON object")
        return doc

    def do_OPTIONS(self):
        self._send(204, b"", "text/plain")

    def do_GET(self):
        url = urlparse(self.path)
        try:
            if url.path == "/bundle":
                self._send_json(200, self.manifest.to_dict())
            elif url.path == "/assign":
                query = parse_qs(url.query)
                try:
                    participant = int(query.get("participant", [""])[0])
                except ValueError:
                    raise ServiceError(400, "participant must be an integer") from None
                assignment = assign_order(participant)
                self._send_json(
                    200,
                    {
                        "order_index": assignment.order_index,
                        "sequence": [
                            {"condition": c, "variant": v} for c, v in assignment.sequence
                        ],
                    },
                )
            elif url.path == "/layout":
                query = parse_qs(url.query)
                if "x" not in query or "y" not in query:
                    raise ServiceError(400, "x and y query parameters are required")
                request = {
                    "chart_id": query.get("chart_id", [None])[0],
                    "method": query.get("method", ["dynamic-context"])[0],
                    "pointer": [float(query["x"][0]), float(query["y"][0])],
                }
                if "settings" in query:
                    request["settings"] = json.loads(query["settings"][0])
                self._send_json(200, compute_layout(self.manifest, request))
            elif m := _CHART_RE.match(url.path):
                chart_id, want_annotation = m.group(1), bool(m.group(2))
                entry = self.manifest.charts.get(chart_id)
                if entry is None:
                    raise ServiceError(404, f"unknown chart_id {chart_id!r}")
                if want_annotation:
                    from .annotation import annotation_to_dict

                    self._send_json(200, annotation_to_dict(entry.annotation))
                else:
                    self._send(200, entry.bitmap_path.read_bytes(), "image/png")
            else:
                raise ServiceError(404, f"no such endpoint {url.path!r}")
        except ServiceError as exc:
            self._fail(exc.status, exc.message)
        except (ValueError, json.JSONDecodeError) as exc:
            self._fail(400, str(exc))

    def do_POST(self):
        url = urlparse(self.path)
        try:
            doc = self._read_json()
            if url.path == "/layout":
                self._send_json(200, compute_layout(self.manifest, doc))
            elif url.path == "/sessions":
                path = self.store.save_session(doc)
                self._send_json(200, {"saved": path.name})
            elif url.path == "/traces":
                path, received = self.store.append_trace(doc)
                self._send_json(200, {"saved": path.name, "received": received})
            else:
                raise ServiceError(404, f"no such endpoint {url.path!r}")
        except ServiceError as exc:
            self._fail(exc.status, exc.message)


def make_server(manifest: BundleManifest, data_dir, host: str = "127.0.0.1", port: int = 8765) -> ThreadingHTTPServer:
    handler = type(
        "BoundHandler",
        (_Handler,),
        {"manifest": manifest, "store": StudyStore(data_dir)},
    )
    server = ThreadingHTTPServer((host, port), handler)
    return server


def serve_forever(manifest: BundleManifest, data_dir, host: str, port: int) -> None:
    server = make_server(manifest, data_dir, host, port)
    host_shown = host or "0.0.0.0"
    print(f"serving bundle at http://{host_shown}:{server.server_address[1]}  (Ctrl-C to stop)")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
