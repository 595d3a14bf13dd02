import json
import threading

import pytest
import requests

from chartcontext.bundle import load_bundle
from chartcontext.geometry import Rect
from chartcontext.overlay import (
    MinimapSettings,
    OverlaySettings,
    layout_dynamic_context,
    layout_minimap,
    layout_to_dict,
)
from chartcontext.server import compute_layout, make_server


@pytest.fixture(scope="module")
def service(demo_bundle_module, tmp_path_factory):
    manifest, violations = load_bundle(demo_bundle_module)
    assert violations == []
    data_dir = tmp_path_factory.mktemp("data")
    server = make_server(manifest, data_dir, port=0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    base = f"http://127.0.0.1:{server.server_address[1]}"
    yield base, manifest, data_dir
    server.shutdown()
    server.server_close()
    thread.join(timeout=5)


@pytest.fixture(scope="module")
def demo_bundle_module(tmp_path_factory):
    from chartcontext.bundle import make_demo_bundle

    root = tmp_path_factory.mktemp("bundle")
    make_demo_bundle(root, seed=7)
    return root


def test_bundle_endpoint(service):
    base, manifest, _ = service
    doc = requests.get(f"{base}/bundle", timeout=10).json()
    assert set(doc["charts"]) == set(manifest.charts)
    assert len(doc["questions"]["v1"]) == 12


def test_chart_bitmap_and_annotation(service):
    base, _, _ = service
    r = requests.get(f"{base}/charts/bar-demo", timeout=10)
    assert r.status_code == 200
    assert r.headers["Content-Type"] == "image/png"
    assert r.content[:8] == b"\x89PNG\r\n\x1a\n"
    ann = requests.get(f"{base}/charts/bar-demo/annotation", timeout=10).json()
    assert ann["chart_id"] == "bar-demo"
    assert ann["chart_type"] == "bar"


def test_unknown_chart_404(service):
    base, _, _ = service
    r = requests.get(f"{base}/charts/never-heard-of-it", timeout=10)
    assert r.status_code == 404
    assert "unknown chart_id" in r.json()["error"]


def test_layout_post_matches_engine(service):
    base, manifest, _ = service
    annotation = manifest.charts["pie-demo"].annotation
    body = {
        "method": "dynamic-context",
        "chart_id": "pie-demo",
        "pointer": [0.4, 0.6],
        "chart_rect": [0.0, 0.0, 1.0, 1.0],
        "settings": {"axis_ratio": 0.5, "crosshair_reach": 0.5},
    }
    got = requests.post(f"{base}/layout", json=body, timeout=10).json()
    settings = OverlaySettings(axis_ratio=0.5, crosshair_reach=0.5)
    expected = layout_to_dict(
        layout_dynamic_context((0.4, 0.6), settings, annotation, Rect(0, 0, 1, 1))
    )
    assert got == expected


def test_layout_minimap_and_hidden(service):
    base, manifest, _ = service
    body = {
        "method": "mini-map",
        "chart_id": "line-demo",
        "pointer": [0.25, 0.25],
        "settings": {"corner": "bottom-left"},
    }
    got = requests.post(f"{base}/layout", json=body, timeout=10).json()
    annotation = manifest.charts["line-demo"].annotation
    expected = layout_to_dict(
        layout_minimap((0.25, 0.25), MinimapSettings(corner="bottom-left"), annotation, Rect(0, 0, 1, 1))
    )
    assert got == expected
    body["pointer"] = [1.4, 0.5]
    assert requests.post(f"{base}/layout", json=body, timeout=10).json() == {"visible": False}


def test_layout_get_uses_defaults(service):
    base, manifest, _ = service
    r = requests.get(
        f"{base}/layout", params={"chart_id": "bar-demo", "x": 0.5, "y": 0.5}, timeout=10
    )
    expected = compute_layout(
        manifest, {"chart_id": "bar-demo", "pointer": [0.5, 0.5], "method": "dynamic-context"}
    )
    assert r.json() == expected


def test_layout_rejects_bad_settings(service):
    base, _, _ = service
    body = {
        "method": "dynamic-context",
        "chart_id": "bar-demo",
        "pointer": [0.5, 0.5],
        "settings": {"axis_ratio": 1.7},
    }
    r = requests.post(f"{base}/layout", json=body, timeout=10)
    assert r.status_code == 400
    assert "(0, 1]" in r.json()["error"]


def test_assign_endpoint(service):
    base, _, _ = service
    doc = requests.get(f"{base}/assign", params={"participant": 4}, timeout=10).json()
    assert doc["order_index"] == 4
    assert doc["sequence"][0] == {"condition": "dynamic-context", "variant": "v2"}


def test_session_persistence(service):
    base, _, data_dir = service
    doc = {
        "participant_id": "42",
        "condition": "mini-map",
        "variant_tag": "v1",
        "time_limit_s": 38,
        "shuffle_seed": 7,
        "settings": {},
        "records": [],
    }
    r = requests.post(f"{base}/sessions", json=doc, timeout=10)
    assert r.status_code == 200
    saved = data_dir / "sessions" / "P42_mini-map_v1.session.json"
    assert saved.is_file()
    assert json.loads(saved.read_text())["participant_id"] == "42"


def test_trace_lines_appended(service):
    base, _, data_dir = service
    body = {
        "participant_id": "42",
        "condition": "mini-map",
        "variant_tag": "v1",
        "question_id": "q01-v1",
        "lines": ["0,0.500000,0.500000", "33,0.510000,0.490000"],
    }
    r1 = requests.post(f"{base}/traces", json=body, timeout=10)
    assert r1.json()["received"] == 2
    body["lines"] = ["67,0.520000,0.480000"]
    requests.post(f"{base}/traces", json=body, timeout=10)
    saved = data_dir / "traces" / "P42_mini-map_v1_q01-v1.trace"
    assert saved.read_text().splitlines() == [
        "0,0.500000,0.500000",
        "33,0.510000,0.490000",
        "67,0.520000,0.480000",
    ]


def test_malformed_body_is_400(service):
    base, _, _ = service
    r = requests.post(
        f"{base}/traces",
        data="{oops",
        headers={"Content-Type": "application/json"},
        timeout=10,
    )
    assert r.status_code == 400


def test_unknown_endpoint_404(service):
    base, _, _ = service
    assert requests.get(f"{base}/nope", timeout=10).status_code == 404
