"""Chart bundles: a directory of annotation files, chart bitmaps, and the
three question-set variants, plus validation of the whole thing.

Layout on disk:

    <root>/annotations/<chart_id>.json
    <root>/charts/<chart_id>.png
    <root>/questions/v0.json  v1.json  v2.json
"""

from __future__ import annotations

import hashlib
import json
import struct
import zlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .annotation import (
    CHART_TYPES,
    AnnotationError,
    ChartAnnotation,
    annotation_to_dict,
    load_annotation_file,
)
from .quiz import VARIANTS, Question, check_variant_coverage, load_question_bundle, question_to_dict

QUESTIONS_PER_VARIANT = 12


@dataclass
class ChartEntry:
    chart_id: str
    annotation: ChartAnnotation
    annotation_path: Path
    bitmap_path: Path
    annotation_digest: str
    bitmap_digest: str


@dataclass
class BundleManifest:
    root: Path
    charts: dict[str, ChartEntry] = field(default_factory=dict)
    questions: dict[str, list[Question]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "root": str(self.root),
            "charts": {
                cid: {
                    "annotation": annotation_to_dict(e.annotation),
                    "bitmap": e.bitmap_path.name,
                    "annotation_sha256": e.annotation_digest,
                    "bitmap_sha256": e.bitmap_digest,
                }
                for cid, e in sorted(self.charts.items())
            },
            "questions": {
                variant: [question_to_dict(q) for q in qs]
                for variant, qs in sorted(self.questions.items())
            },
        }


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def load_bundle(root) -> tuple[BundleManifest, list[str]]:
    """Read a bundle and collect every violation (empty list = valid).

    Unreadable or malformed files become violations naming the file and,
    where known, the field path; loading continues so one bad chart does
    not hide the rest of the report.
    """
    root = Path(root)
    manifest = BundleManifest(root=root)
    violations: list[str] = []

    ann_dir = root / "annotations"
    chart_dir = root / "charts"
    q_dir = root / "questions"
    if not ann_dir.is_dir():
        violations.append("annotations/: directory missing")
    if not q_dir.is_dir():
        violations.append("questions/: directory missing")

    if ann_dir.is_dir():
        for path in sorted(ann_dir.glob("*.json")):
            try:
                ann = load_annotation_file(path)
            except AnnotationError as exc:
                violations.append(f"annotations/{path.name}: {exc}")
                continue
            except (OSError, ValueError) as exc:
                violations.append(f"annotations/{path.name}: unreadable ({exc})")
                continue
            bitmap = chart_dir / f"{ann.chart_id}.png"
            if not bitmap.is_file():
                violations.append(f"charts/{bitmap.name}: bitmap missing for annotated chart {ann.chart_id!r}")
                continue
            if ann.chart_id in manifest.charts:
                violations.append(f"annotations/{path.name}: duplicate chart_id {ann.chart_id!r}")
                continue
            manifest.charts[ann.chart_id] = ChartEntry(
                chart_id=ann.chart_id,
                annotation=ann,
                annotation_path=path,
                bitmap_path=bitmap,
                annotation_digest=_sha256(path),
                bitmap_digest=_sha256(bitmap),
            )

    all_questions: list[Question] = []
    if q_dir.is_dir():
        for variant in VARIANTS:
            path = q_dir / f"{variant}.json"
            if not path.is_file():
                violations.append(f"questions/{variant}.json: file missing")
                continue
            try:
                qs = load_question_bundle(path.read_text(encoding="utf-8"))
            except (OSError, ValueError) as exc:
                violations.append(f"questions/{variant}.json: {exc}")
                continue
            manifest.questions[variant] = qs
            all_questions.extend(qs)
            if len(qs) != QUESTIONS_PER_VARIANT:
                violations.append(
                    f"questions/{variant}.json: expected {QUESTIONS_PER_VARIANT} questions, got {len(qs)}"
                )
            for q in qs:
                if q.variant_tag != variant:
                    violations.append(
                        f"questions/{variant}.json: {q.question_id} tagged {q.variant_tag}"
                    )
                if q.chart_id not in manifest.charts:
                    violations.append(
                        f"questions/{variant}.json: {q.question_id} references unknown chart {q.chart_id!r}"
                    )

    violations.extend(check_variant_coverage(all_questions))
    return manifest, violations


# --- minimal PNG writing (keeps demo bundles byte-deterministic) -----------------

def _png_chunk(tag: bytes, data: bytes) -> bytes:
    return (
        struct.pack(">I", len(data))
        + tag
        + data
        + struct.pack(">I", zlib.crc32(tag + data) & 0xFFFFFFFF)
    )


def write_png(path, rgb: np.ndarray) -> None:
    """Write an (h, w, 3) uint8 array as an RGB PNG."""
    h, w, depth = rgb.shape
    if depth != 3 or rgb.dtype != np.uint8:
        raise ValueError("expected (h, w, 3) uint8")
    raw = b"".join(b"\x00" + rgb[y].tobytes() for y in range(h))
    ihdr = struct.pack(">IIBBBBB", w, h, 8, 2, 0, 0, 0)
    payload = (
        b"\x89PNG\r\n\x1a\n"
        + _png_chunk(b"IHDR", ihdr)
        + _png_chunk(b"IDAT", zlib.compress(raw, 9))
        + _png_chunk(b"IEND", b"")
    )
    Path(path).write_bytes(payload)


# --- demo bundle ------------------------------------------------------------------

_DEMO_W, _DEMO_H = 640, 480

_DEMO_BOXES = {
    "plot_area": [0.15, 0.08, 0.95, 0.85],
    "x_axis": [0.15, 0.85, 0.95, 0.94],
    "y_axis": [0.04, 0.08, 0.15, 0.85],
    "x_axis_title": [0.40, 0.94, 0.70, 0.99],
    "y_axis_title": [0.0, 0.25, 0.035, 0.65],
}

_DEMO_LEGEND = [0.72, 0.10, 0.93, 0.28]

# Chart types whose demo rendition carries a legend box.
_LEGEND_TYPES = {"treemap", "stacked-bar-100", "choropleth", "pie", "bubble", "stacked-bar", "stacked-area"}

_DEMO_PROMPTS = {
    "v0": ("Which category has the highest value?", 1),
    "v1": ("Which category has the highest score?", 2),
    "v2": ("Which category has the lowest value?", 0),
}

_DEMO_MODS = {"v1": ("topic", "data:noise"), "v2": ("orientation", "data:permutation")}


def _px(frac: float, size: int) -> int:
    return int(round(frac * size))


def _render_demo_chart(chart_type: str, has_legend: bool, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    img = np.full((_DEMO_H, _DEMO_W, 3), 255, dtype=np.uint8)
    px0, py0, px1, py1 = (
        _px(_DEMO_BOXES["plot_area"][0], _DEMO_W),
        _px(_DEMO_BOXES["plot_area"][1], _DEMO_H),
        _px(_DEMO_BOXES["plot_area"][2], _DEMO_W),
        _px(_DEMO_BOXES["plot_area"][3], _DEMO_H),
    )
    # axis lines
    img[py1 : py1 + 2, px0:px1] = 0
    img[py0:py1, px0 : px0 + 2] = 0
    # tick blobs along the bands
    for fx in np.linspace(0.0, 1.0, 6):
        x = px0 + int(fx * (px1 - px0 - 4))
        img[py1 + 4 : py1 + 14, x : x + 8] = 60
    for fy in np.linspace(0.0, 1.0, 5):
        y = py0 + int(fy * (py1 - py0 - 4))
        img[y : y + 6, px0 - 24 : px0 - 6] = 60
    # a few "data" bars with deterministic heights
    heights = rng.uniform(0.2, 0.95, size=6)
    bar_w = (px1 - px0) // 8
    for k, hfrac in enumerate(heights):
        x = px0 + 10 + k * (bar_w + 8)
        top = py1 - int(hfrac * (py1 - py0 - 10))
        shade = 90 + 20 * (k % 3)
        img[top:py1, x : x + bar_w] = shade
    if has_legend:
        lx0, ly0, lx1, ly1 = (
            _px(_DEMO_LEGEND[0], _DEMO_W),
            _px(_DEMO_LEGEND[1], _DEMO_H),
            _px(_DEMO_LEGEND[2], _DEMO_W),
            _px(_DEMO_LEGEND[3], _DEMO_H),
        )
        img[ly0:ly1, lx0:lx1] = 235
        img[ly0 : ly0 + 2, lx0:lx1] = 0
        img[ly1 - 2 : ly1, lx0:lx1] = 0
        img[ly0:ly1, lx0 : lx0 + 2] = 0
        img[ly0:ly1, lx1 - 2 : lx1] = 0
    # title strip placeholders
    img[_px(0.95, _DEMO_H) : _px(0.98, _DEMO_H), _px(0.42, _DEMO_W) : _px(0.68, _DEMO_W)] = 120
    img[_px(0.3, _DEMO_H) : _px(0.6, _DEMO_H), _px(0.005, _DEMO_W) : _px(0.03, _DEMO_W)] = 120
    return img


def make_demo_bundle(root, seed: int = 7) -> BundleManifest:
    """Generate a complete, valid 12-chart bundle with all three question
    variants.  Purely synthetic; deterministic for a given seed."""
    root = Path(root)
    (root / "annotations").mkdir(parents=True, exist_ok=True)
    (root / "charts").mkdir(parents=True, exist_ok=True)
    (root / "questions").mkdir(parents=True, exist_ok=True)

    for k, chart_type in enumerate(CHART_TYPES):
        chart_id = f"{chart_type}-demo"
        has_legend = chart_type in _LEGEND_TYPES
        doc = {
            "chart_id": chart_id,
            "image_width": _DEMO_W,
            "image_height": _DEMO_H,
            "chart_type": chart_type,
            **{k2: list(v) for k2, v in _DEMO_BOXES.items()},
        }
        if has_legend:
            doc["legend"] = list(_DEMO_LEGEND)
        (root / "annotations" / f"{chart_id}.json").write_text(
            json.dumps(doc, indent=2) + "\n", encoding="utf-8"
        )
        write_png(root / "charts" / f"{chart_id}.png", _render_demo_chart(chart_type, has_legend, seed + k))

    options = ["North", "East", "South", "West"]
    for variant in VARIANTS:
        prompt, correct = _DEMO_PROMPTS[variant]
        questions = []
        for k, chart_type in enumerate(CHART_TYPES):
            questions.append(
                {
                    "question_id": f"q{k + 1:02d}-{variant}",
                    "chart_id": f"{chart_type}-demo",
                    "prompt": f"{prompt} ({chart_type})",
                    "options": options,
                    "correct_index": (correct + k) % len(options),
                    "variant_tag": variant,
                    "chart_type": chart_type,
                    **({"modifications": list(_DEMO_MODS[variant])} if variant in _DEMO_MODS else {}),
                }
            )
        (root / "questions" / f"{variant}.json").write_text(
            json.dumps(questions, indent=2) + "\n", encoding="utf-8"
        )

    manifest, violations = load_bundle(root)
    if violations:  # the generator must always produce a valid bundle
        raise RuntimeError("demo bundle failed validation: " + "; ".join(violations))
    return manifest
