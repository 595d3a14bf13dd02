"""Chart annotation model: bitmap dimensions plus the bounding boxes of the
context elements (axes, axis titles, legend, plot area) that drive both
interaction methods.

Annotations are human-authored JSON files, one object per chart.  Rects are
4-element arrays [x0, y0, x1, y1] of decimals in normalized image
coordinates.  Values are immutable after load and safe to share across
threads.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, fields
from typing import BinaryIO, Union

from .geometry import Rect, overlap_1d

# The 12 chart types of the short-form visualization literacy test,
# one question per type.
CHART_TYPES = (
    "treemap",
    "stacked-bar-100",
    "histogram",
    "choropleth",
    "pie",
    "bubble",
    "stacked-bar",
    "line",
    "bar",
    "area",
    "stacked-area",
    "scatter",
)

# Portion of the x-axis band's own height that may poke into the plot area.
# Axis bands sit at the chart margins; small overlaps come from tick marks.
AXIS_PLOT_OVERLAP_LIMIT = 0.10

REQUIRED_RECTS = ("plot_area", "x_axis", "y_axis")
OPTIONAL_RECTS = ("x_axis_title", "y_axis_title", "legend")


class AnnotationError(ValueError):
    """Malformed or invalid annotation document.

    ``path`` points at the offending field (dot notation).
    """

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


@dataclass(frozen=True)
class Violation:
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.message}"


@dataclass(frozen=True)
class ChartAnnotation:
    chart_id: str
    image_width: int
    image_height: int
    chart_type: str
    plot_area: Rect
    x_axis: Rect
    y_axis: Rect
    x_axis_title: Rect | None = None
    y_axis_title: Rect | None = None
    legend: Rect | None = None


def validate_annotation(a: ChartAnnotation) -> list[Violation]:
    """All invariant violations of an annotation; empty list means valid.

    Violations are data, not errors: overlap of legend and plot area, for
    example, is legal (some charts embed the legend in the design) and is
    not reported.
    """
    out: list[Violation] = []
    if a.image_width <= 0:
        out.append(Violation("image_width", f"must be positive, got {a.image_width}"))
    if a.image_height <= 0:
        out.append(Violation("image_height", f"must be positive, got {a.image_height}"))
    if a.chart_type not in CHART_TYPES:
        out.append(Violation("chart_type", f"unknown chart type {a.chart_type!r}"))

    for name in REQUIRED_RECTS + OPTIONAL_RECTS:
        rect: Rect | None = getattr(a, name)
        if rect is None:
            continue
        if not rect.is_ordered():
            out.append(Violation(name, f"inverted rect at {name}"))
            continue
        if not rect.in_unit_square():
            out.append(Violation(name, "rect exceeds the unit square"))

    # x-axis band must hug the chart margin: its vertical extent may cut into
    # the plot area interior by at most 10% of its own height.
    xa, plot = a.x_axis, a.plot_area
    if xa.is_ordered() and plot.is_ordered():
        overlap = overlap_1d(xa.y0, xa.y1, plot.y0, plot.y1)
        if overlap > AXIS_PLOT_OVERLAP_LIMIT * xa.height:
            out.append(
                Violation(
                    "x_axis",
                    "x_axis band overlaps plot_area interior by "
                    f"{overlap:.4f}, more than 10% of its height",
                )
            )
    return out


def _parse_rect(doc: dict, key: str, chart_path: str, required: bool) -> Rect | None:
    if key not in doc or doc[key] is None:
        if required:
            raise AnnotationError(f"{chart_path}{key}", "missing required field")
        return None
    raw = doc[key]
    try:
        rect = Rect.from_seq(raw)
    except (TypeError, ValueError) as exc:
        raise AnnotationError(f"{chart_path}{key}", str(exc)) from exc
    if not rect.is_ordered():
        raise AnnotationError(f"{chart_path}{key}", f"inverted rect at {key}")
    return rect


def annotation_from_dict(doc: dict, chart_path: str = "") -> ChartAnnotation:
    if not isinstance(doc, dict):
        raise AnnotationError(chart_path or "<root>", "document must be an object")
    for key in ("chart_id", "image_width", "image_height", "chart_type"):
        if key not in doc:
            raise AnnotationError(f"{chart_path}{key}", "missing required field")
    try:
        width = int(doc["image_width"])
        height = int(doc["image_height"])
    except (TypeError, ValueError) as exc:
        raise AnnotationError(f"{chart_path}image_width", f"not an integer: {exc}") from exc

    ann = ChartAnnotation(
        chart_id=str(doc["chart_id"]),
        image_width=width,
        image_height=height,
        chart_type=str(doc["chart_type"]),
        plot_area=_parse_rect(doc, "plot_area", chart_path, required=True),
        x_axis=_parse_rect(doc, "x_axis", chart_path, required=True),
        y_axis=_parse_rect(doc, "y_axis", chart_path, required=True),
        x_axis_title=_parse_rect(doc, "x_axis_title", chart_path, required=False),
        y_axis_title=_parse_rect(doc, "y_axis_title", chart_path, required=False),
        legend=_parse_rect(doc, "legend", chart_path, required=False),
    )
    violations = validate_annotation(ann)
    if violations:
        first = violations[0]
        raise AnnotationError(f"{chart_path}{first.path}", first.message)
    return ann


def load_annotation(source: Union[bytes, str, BinaryIO]) -> ChartAnnotation:
    """Parse and validate one annotation document (JSON bytes/str/stream)."""
    if isinstance(source, bytes):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    elif hasattr(source, "read"):
        data = source.read()
        text = data.decode("utf-8") if isinstance(data, bytes) else data
    else:
        raise TypeError(f"cannot load annotation from {type(source).__name__}")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AnnotationError("<document>", f"malformed JSON: {exc}") from exc
    return annotation_from_dict(doc)


def annotation_to_dict(a: ChartAnnotation) -> dict:
    doc: dict = {
        "chart_id": a.chart_id,
        "image_width": a.image_width,
        "image_height": a.image_height,
        "chart_type": a.chart_type,
    }
    for f in fields(a):
        val = getattr(a, f.name)
        if isinstance(val, Rect):
            doc[f.name] = val.as_list()
    return doc


def serialize_annotation(a: ChartAnnotation) -> bytes:
    """Inverse of load_annotation: load(serialize(a)) == a."""
    return json.dumps(annotation_to_dict(a), indent=2).encode("utf-8")


def load_annotation_file(path) -> ChartAnnotation:
    with io.open(path, "rb") as fh:
        return load_annotation(fh)
