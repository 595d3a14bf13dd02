"""Pure layout engine for the two pointer-anchored interaction methods.

Given the pointer position, the settings, the chart annotation, and the
rect the chart occupies in the viewport, compute the complete overlay
geometry for one frame.  Everything is in normalized viewport coordinates
(top-left origin); the caller converts to pixels at paint time.

All operations are pure functions of their inputs: identical inputs yield
bit-identical layouts, so results can be golden-tested and computed from
any number of threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from ..annotation import ChartAnnotation
from ..geometry import Rect, clamp
from .settings import MinimapSettings, OverlaySettings

Point = tuple[float, float]
Segment = tuple[Point, Point]


class AxisWindow(NamedTuple):
    """Axis interval [lo, lo+width] selected for projection.

    Carried as (lo, width) so the constant-width guarantee is exact in
    floating point; ``hi`` is derived.
    """

    lo: float
    width: float

    @property
    def hi(self) -> float:
        return self.lo + self.width


def project_axis_window(pointer_u: float, axis_ratio: float) -> AxisWindow:
    """Window of the axis around the pointer, ``axis_ratio`` of its length.

    Centered on ``pointer_u`` when that fits; near the axis ends the window
    slides (clamps) to stay inside [0, 1] at full width, so the visible
    context never shrinks.
    """
    if not 0.0 < axis_ratio <= 1.0:
        raise ValueError(f"axis_ratio must be in (0, 1], got {axis_ratio}")
    lo = clamp(pointer_u - axis_ratio / 2.0, 0.0, 1.0 - axis_ratio)
    return AxisWindow(lo, axis_ratio)


def crosshair_segments(oa: Rect, reach: float) -> tuple[Segment, Segment, Segment, Segment]:
    """Four gridline-substitute segments radiating from the OA center.

    Order: up, down, left, right.  ``reach`` scales each segment relative
    to the OA half-extent: 0.5 reaches halfway to the border, 1.0 reaches
    the edges.
    """
    cx, cy = oa.center
    dy = reach * (oa.height / 2.0)
    dx = reach * (oa.width / 2.0)
    return (
        ((cx, cy), (cx, cy - dy)),
        ((cx, cy), (cx, cy + dy)),
        ((cx, cy), (cx - dx, cy)),
        ((cx, cy), (cx + dx, cy)),
    )


@dataclass(frozen=True)
class OverlayLayout:
    oa: Rect
    x_axis_src: Rect | None
    x_axis_dst: Rect | None
    y_axis_src: Rect | None
    y_axis_dst: Rect | None
    x_title_src: Rect | None
    x_title_dst: Rect | None
    y_title_src: Rect | None
    y_title_dst: Rect | None
    legend_src: Rect | None
    legend_dst: Rect | None
    crosshair: tuple[Segment, Segment, Segment, Segment]
    dim_region: tuple[Rect, Rect, Rect, Rect]
    oa_exceeds_chart: bool


@dataclass(frozen=True)
class MinimapLayout:
    oa: Rect
    map_dst: Rect
    indicator_center: Point
    indicator_radius: float
    dim_region: tuple[Rect, Rect, Rect, Rect]
    oa_exceeds_chart: bool


def _oa_rect(pointer: Point, width: float, height: float) -> Rect:
    # Centered on the pointer, slid (not shrunk) to stay inside the viewport;
    # clipping at display edges was a reported defect to avoid.
    x0 = clamp(pointer[0] - width / 2.0, 0.0, 1.0 - width)
    y0 = clamp(pointer[1] - height / 2.0, 0.0, 1.0 - height)
    return Rect(x0, y0, x0 + width, y0 + height)


def _dim_region(oa: Rect) -> tuple[Rect, Rect, Rect, Rect]:
    # Viewport minus OA as four bands (some may be zero-area at the edges).
    return (
        Rect(0.0, 0.0, 1.0, oa.y0),
        Rect(0.0, oa.y1, 1.0, 1.0),
        Rect(0.0, oa.y0, oa.x0, oa.y1),
        Rect(oa.x1, oa.y0, 1.0, oa.y1),
    )


def _clip_pair(src: Rect, dst: Rect, oa: Rect, kx: float, ky: float):
    """Clip dst to the OA and cut src by the same display lengths, keeping
    the 1:1 source-to-destination scale."""
    clipped = dst.intersect(oa)
    if clipped is None:
        return None, None
    left = clipped.x0 - dst.x0
    right = dst.x1 - clipped.x1
    top = clipped.y0 - dst.y0
    bottom = dst.y1 - clipped.y1
    src2 = Rect(
        src.x0 + (left / kx if kx else 0.0),
        src.y0 + (top / ky if ky else 0.0),
        src.x1 - (right / kx if kx else 0.0),
        src.y1 - (bottom / ky if ky else 0.0),
    )
    return src2, clipped


def _chart_to_viewport_scale(chart_rect: Rect) -> tuple[float, float]:
    return chart_rect.width, chart_rect.height


def _plot_fraction(img_uv: float, lo: float, extent: float) -> float:
    if extent <= 0.0:
        return 0.5
    return clamp((img_uv - lo) / extent, 0.0, 1.0)


def layout_dynamic_context(
    pointer: Point,
    settings: OverlaySettings,
    annotation: ChartAnnotation,
    chart_rect: Rect,
) -> OverlayLayout | None:
    """Full dynamic-context geometry for one frame, or None when the overlay
    is hidden (pointer off the chart, or context toggled off).

    The axis strips are windows of the annotated axis bands around the
    pointer's plot-area position; strips, titles, and legend keep their
    on-screen scale from the displayed chart (no rescaling) and are clipped
    to the OA.  Placement inside the OA: x axis at the bottom, y axis flush
    left, axis titles bottom-right and top-left, legend top-right.  With an
    axis ratio of 1 both full axes are anchored so they meet at the OA's
    bottom-left corner.
    """
    if not settings.context_enabled:
        return None
    if not chart_rect.contains_point(*pointer):
        return None

    oa = _oa_rect(pointer, settings.oa_width, settings.oa_height)
    kx, ky = _chart_to_viewport_scale(chart_rect)
    ratio = settings.axis_ratio
    full_axes = ratio == 1.0

    # Pointer in chart-image coordinates, then as a fraction of the plot area.
    u_img = (pointer[0] - chart_rect.x0) / kx if kx else 0.0
    v_img = (pointer[1] - chart_rect.y0) / ky if ky else 0.0
    plot = annotation.plot_area
    u = _plot_fraction(u_img, plot.x0, plot.width)
    v = _plot_fraction(v_img, plot.y0, plot.height)

    # X axis: cut the annotated band along its length, place at the OA bottom.
    band = annotation.x_axis
    win = project_axis_window(u, ratio)
    src_x = Rect(band.x0 + win.lo * band.width, band.y0,
                 band.x0 + win.hi * band.width, band.y1)
    w, h = src_x.width * kx, src_x.height * ky
    x0 = oa.x0 if full_axes else (oa.x0 + oa.x1) / 2.0 - w / 2.0
    dst_x = Rect(x0, oa.y1 - h, x0 + w, oa.y1)
    x_axis_src, x_axis_dst = _clip_pair(src_x, dst_x, oa, kx, ky)

    # Y axis: same along its (vertical) length, flush with the OA left edge.
    band = annotation.y_axis
    win = project_axis_window(v, ratio)
    src_y = Rect(band.x0, band.y0 + win.lo * band.height,
                 band.x1, band.y0 + win.hi * band.height)
    w, h = src_y.width * kx, src_y.height * ky
    y0 = oa.y1 - h if full_axes else (oa.y0 + oa.y1) / 2.0 - h / 2.0
    dst_y = Rect(oa.x0, y0, oa.x0 + w, y0 + h)
    y_axis_src, y_axis_dst = _clip_pair(src_y, dst_y, oa, kx, ky)

    # Titles and legend are shown whole, anchored to their OA corners.
    def corner_pair(rect: Rect | None, anchor: str):
        if rect is None:
            return None, None
        w, h = rect.width * kx, rect.height * ky
        if anchor == "bottom-right":
            dst = Rect(oa.x1 - w, oa.y1 - h, oa.x1, oa.y1)
        elif anchor == "top-left":
            dst = Rect(oa.x0, oa.y0, oa.x0 + w, oa.y0 + h)
        else:  # top-right
            dst = Rect(oa.x1 - w, oa.y0, oa.x1, oa.y0 + h)
        return _clip_pair(rect, dst, oa, kx, ky)

    x_title_src, x_title_dst = corner_pair(annotation.x_axis_title, "bottom-right")
    y_title_src, y_title_dst = corner_pair(annotation.y_axis_title, "top-left")
    legend_src, legend_dst = corner_pair(annotation.legend, "top-right")

    return OverlayLayout(
        oa=oa,
        x_axis_src=x_axis_src,
        x_axis_dst=x_axis_dst,
        y_axis_src=y_axis_src,
        y_axis_dst=y_axis_dst,
        x_title_src=x_title_src,
        x_title_dst=x_title_dst,
        y_title_src=y_title_src,
        y_title_dst=y_title_dst,
        legend_src=legend_src,
        legend_dst=legend_dst,
        crosshair=crosshair_segments(oa, settings.crosshair_reach),
        dim_region=_dim_region(oa),
        oa_exceeds_chart=oa.width > chart_rect.width or oa.height > chart_rect.height,
    )


def layout_minimap(
    pointer: Point,
    settings: MinimapSettings,
    annotation: ChartAnnotation,
    chart_rect: Rect,
) -> MinimapLayout | None:
    """Mini-map geometry for one frame, or None when hidden.

    The minified chart view sits flush with the configured OA corner at
    ``map_scale`` of the OA width, preserving the chart's aspect ratio; the
    circular indicator is the affine image of the pointer under the
    chart-to-map transform.
    """
    if not settings.enabled:
        return None
    if not chart_rect.contains_point(*pointer):
        return None

    oa = _oa_rect(pointer, settings.oa_width, settings.oa_height)
    map_w = settings.map_scale * oa.width
    aspect = (chart_rect.height / chart_rect.width) if chart_rect.width else 1.0
    map_h = map_w * aspect
    if map_h > oa.height:  # very tall charts: shrink, keep aspect
        scale = oa.height / map_h
        map_w *= scale
        map_h = oa.height

    if settings.corner == "top-left":
        mx0, my0 = oa.x0, oa.y0
    elif settings.corner == "top-right":
        mx0, my0 = oa.x1 - map_w, oa.y0
    elif settings.corner == "bottom-left":
        mx0, my0 = oa.x0, oa.y1 - map_h
    else:  # bottom-right
        mx0, my0 = oa.x1 - map_w, oa.y1 - map_h
    map_dst = Rect(mx0, my0, mx0 + map_w, my0 + map_h)

    tx = (pointer[0] - chart_rect.x0) / chart_rect.width if chart_rect.width else 0.5
    ty = (pointer[1] - chart_rect.y0) / chart_rect.height if chart_rect.height else 0.5
    cx = clamp(map_dst.x0 + tx * map_w, map_dst.x0, map_dst.x1)
    cy = clamp(map_dst.y0 + ty * map_h, map_dst.y0, map_dst.y1)

    return MinimapLayout(
        oa=oa,
        map_dst=map_dst,
        indicator_center=(cx, cy),
        indicator_radius=settings.indicator_radius * map_w,
        dim_region=_dim_region(oa),
        oa_exceeds_chart=oa.width > chart_rect.width or oa.height > chart_rect.height,
    )


def _round6(value: float) -> float:
    return round(value, 6) + 0.0  # normalize -0.0


def _rect_out(rect: Rect | None):
    if rect is None:
        return None
    return [_round6(v) for v in rect.as_list()]


def _segment_out(seg: Segment):
    (ax, ay), (bx, by) = seg
    return [[_round6(ax), _round6(ay)], [_round6(bx), _round6(by)]]


def layout_to_dict(layout: OverlayLayout | MinimapLayout | None) -> dict:
    """Structured-text form of a layout (rects as 4-arrays, segments as
    point pairs, 6 decimal places) for golden tests and the wire format."""
    if layout is None:
        return {"visible": False}
    if isinstance(layout, MinimapLayout):
        return {
            "visible": True,
            "method": "mini-map",
            "oa": _rect_out(layout.oa),
            "map_dst": _rect_out(layout.map_dst),
            "indicator_center": [
                _round6(layout.indicator_center[0]),
                _round6(layout.indicator_center[1]),
            ],
            "indicator_radius": _round6(layout.indicator_radius),
            "dim_region": [_rect_out(r) for r in layout.dim_region],
            "oa_exceeds_chart": layout.oa_exceeds_chart,
        }
    return {
        "visible": True,
        "method": "dynamic-context",
        "oa": _rect_out(layout.oa),
        "x_axis_src": _rect_out(layout.x_axis_src),
        "x_axis_dst": _rect_out(layout.x_axis_dst),
        "y_axis_src": _rect_out(layout.y_axis_src),
        "y_axis_dst": _rect_out(layout.y_axis_dst),
        "x_title_src": _rect_out(layout.x_title_src),
        "x_title_dst": _rect_out(layout.x_title_dst),
        "y_title_src": _rect_out(layout.y_title_src),
        "y_title_dst": _rect_out(layout.y_title_dst),
        "legend_src": _rect_out(layout.legend_src),
        "legend_dst": _rect_out(layout.legend_dst),
        "crosshair": [_segment_out(s) for s in layout.crosshair],
        "dim_region": [_rect_out(r) for r in layout.dim_region],
        "oa_exceeds_chart": layout.oa_exceeds_chart,
    }
