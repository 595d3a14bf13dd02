/**
 * Layout engine for the pointer-anchored overlays, embedded in the browser
 * so hover rendering needs no network round trip.
 *
 * This is a port of the backend engine and must produce identical layout
 * documents; the golden-layout test compares both field-for-field at the
 * 6-decimal export convention. Keep the arithmetic (and its order) in sync.
 */

export interface Rect {
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

export type RectArray = [number, number, number, number];
export type Point = [number, number];
export type Segment = [Point, Point];

export interface AnnotationDoc {
  chart_id: string;
  image_width: number;
  image_height: number;
  chart_type: string;
  plot_area: RectArray;
  x_axis: RectArray;
  y_axis: RectArray;
  x_axis_title?: RectArray | null;
  y_axis_title?: RectArray | null;
  legend?: RectArray | null;
}

export interface OverlaySettings {
  oa_width: number;
  oa_height: number;
  border_thickness: number;
  border_color: number[];
  outer_dimming: boolean;
  dimming_opacity: number;
  axis_ratio: number;
  crosshair_thickness: number;
  crosshair_color: number[];
  crosshair_opacity: number;
  crosshair_reach: number;
  context_enabled: boolean;
}

export interface MinimapSettings {
  oa_width: number;
  oa_height: number;
  border_thickness: number;
  border_color: number[];
  outer_dimming: boolean;
  dimming_opacity: number;
  corner: "top-left" | "top-right" | "bottom-left" | "bottom-right";
  map_scale: number;
  indicator_radius: number;
  indicator_fill: number[];
  enabled: boolean;
}

export const defaultOverlaySettings = (): OverlaySettings => ({
  oa_width: 0.3,
  oa_height: 0.3,
  border_thickness: 2.0,
  border_color: [0, 0, 0, 255],
  outer_dimming: true,
  dimming_opacity: 0.5,
  axis_ratio: 0.3,
  crosshair_thickness: 2.0,
  crosshair_color: [0, 0, 0, 255],
  crosshair_opacity: 1.0,
  crosshair_reach: 1.0,
  context_enabled: true,
});

export const defaultMinimapSettings = (): MinimapSettings => ({
  oa_width: 0.3,
  oa_height: 0.3,
  border_thickness: 2.0,
  border_color: [0, 0, 0, 255],
  outer_dimming: true,
  dimming_opacity: 0.5,
  corner: "top-right",
  map_scale: 0.3,
  indicator_radius: 0.15,
  indicator_fill: [0, 0, 0, 255],
  enabled: true,
});

export function rect(x0: number, y0: number, x1: number, y1: number): Rect {
  return { x0, y0, x1, y1 };
}

export function rectFromArray(a: RectArray): Rect {
  return { x0: a[0], y0: a[1], x1: a[2], y1: a[3] };
}

export const rectWidth = (r: Rect): number => r.x1 - r.x0;
export const rectHeight = (r: Rect): number => r.y1 - r.y0;

export function containsPoint(r: Rect, x: number, y: number): boolean {
  return r.x0 <= x && x <= r.x1 && r.y0 <= y && y <= r.y1;
}

export function clamp(v: number, lo: number, hi: number): number {
  return v < lo ? lo : v > hi ? hi : v;
}

export interface AxisWindow {
  lo: number;
  width: number;
  hi: number;
}

/** Window of the axis around the pointer: constant width, clamped to [0,1]. */
export function projectAxisWindow(pointerU: number, axisRatio: number): AxisWindow {
  if (!(axisRatio > 0 && axisRatio <= 1)) {
    throw new RangeError(`axis_ratio must be in (0, 1], got ${axisRatio}`);
  }
  const lo = clamp(pointerU - axisRatio / 2, 0, 1 - axisRatio);
  return { lo, width: axisRatio, hi: lo + axisRatio };
}

/** Four segments radiating from the OA center: up, down, left, right. */
export function crosshairSegments(oa: Rect, reach: number): [Segment, Segment, Segment, Segment] {
  const cx = (oa.x0 + oa.x1) / 2;
  const cy = (oa.y0 + oa.y1) / 2;
  const dy = reach * (rectHeight(oa) / 2);
  const dx = reach * (rectWidth(oa) / 2);
  return [
    [[cx, cy], [cx, cy - dy]],
    [[cx, cy], [cx, cy + dy]],
    [[cx, cy], [cx - dx, cy]],
    [[cx, cy], [cx + dx, cy]],
  ];
}

function oaRect(pointer: Point, width: number, height: number): Rect {
  const x0 = clamp(pointer[0] - width / 2, 0, 1 - width);
  const y0 = clamp(pointer[1] - height / 2, 0, 1 - height);
  return rect(x0, y0, x0 + width, y0 + height);
}

function dimRegion(oa: Rect): [Rect, Rect, Rect, Rect] {
  return [
    rect(0, 0, 1, oa.y0),
    rect(0, oa.y1, 1, 1),
    rect(0, oa.y0, oa.x0, oa.y1),
    rect(oa.x1, oa.y0, 1, oa.y1),
  ];
}

function intersect(a: Rect, b: Rect): Rect | null {
  const x0 = Math.max(a.x0, b.x0);
  const y0 = Math.max(a.y0, b.y0);
  const x1 = Math.min(a.x1, b.x1);
  const y1 = Math.min(a.y1, b.y1);
  if (x0 > x1 || y0 > y1) return null;
  return rect(x0, y0, x1, y1);
}

/** Clip dst to the OA and cut src by the same display lengths (1:1 scale). */
function clipPair(src: Rect, dst: Rect, oa: Rect, kx: number, ky: number): [Rect | null, Rect | null] {
  const clipped = intersect(dst, oa);
  if (clipped === null) return [null, null];
  const left = clipped.x0 - dst.x0;
  const right = dst.x1 - clipped.x1;
  const top = clipped.y0 - dst.y0;
  const bottom = dst.y1 - clipped.y1;
  const src2 = rect(
    src.x0 + (kx ? left / kx : 0),
    src.y0 + (ky ? top / ky : 0),
    src.x1 - (kx ? right / kx : 0),
    src.y1 - (ky ? bottom / ky : 0),
  );
  return [src2, clipped];
}

function plotFraction(imgUV: number, lo: number, extent: number): number {
  if (extent <= 0) return 0.5;
  return clamp((imgUV - lo) / extent, 0, 1);
}

export interface OverlayLayout {
  oa: Rect;
  x_axis_src: Rect | null;
  x_axis_dst: Rect | null;
  y_axis_src: Rect | null;
  y_axis_dst: Rect | null;
  x_title_src: Rect | null;
  x_title_dst: Rect | null;
  y_title_src: Rect | null;
  y_title_dst: Rect | null;
  legend_src: Rect | null;
  legend_dst: Rect | null;
  crosshair: [Segment, Segment, Segment, Segment];
  dim_region: [Rect, Rect, Rect, Rect];
  oa_exceeds_chart: boolean;
}

export interface MinimapLayout {
  oa: Rect;
  map_dst: Rect;
  indicator_center: Point;
  indicator_radius: number;
  dim_region: [Rect, Rect, Rect, Rect];
  oa_exceeds_chart: boolean;
}

export function layoutDynamicContext(
  pointer: Point,
  settings: OverlaySettings,
  annotation: AnnotationDoc,
  chartRect: Rect,
): OverlayLayout | null {
  if (!settings.context_enabled) return null;
  if (!containsPoint(chartRect, pointer[0], pointer[1])) return null;

  const oa = oaRect(pointer, settings.oa_width, settings.oa_height);
  const kx = rectWidth(chartRect);
  const ky = rectHeight(chartRect);
  const ratio = settings.axis_ratio;
  const fullAxes = ratio === 1.0;

  const uImg = kx ? (pointer[0] - chartRect.x0) / kx : 0;
  const vImg = ky ? (pointer[1] - chartRect.y0) / ky : 0;
  const plot = rectFromArray(annotation.plot_area);
  const u = plotFraction(uImg, plot.x0, rectWidth(plot));
  const v = plotFraction(vImg, plot.y0, rectHeight(plot));

  // x axis strip: window along the band, placed at the OA bottom
  let band = rectFromArray(annotation.x_axis);
  let win = projectAxisWindow(u, ratio);
  const srcX = rect(
    band.x0 + win.lo * rectWidth(band),
    band.y0,
    band.x0 + win.hi * rectWidth(band),
    band.y1,
  );
  let w = rectWidth(srcX) * kx;
  let h = rectHeight(srcX) * ky;
  const xStripX0 = fullAxes ? oa.x0 : (oa.x0 + oa.x1) / 2 - w / 2;
  const dstX = rect(xStripX0, oa.y1 - h, xStripX0 + w, oa.y1);
  const [xAxisSrc, xAxisDst] = clipPair(srcX, dstX, oa, kx, ky);

  // y axis strip: window along the band, flush with the OA left edge
  band = rectFromArray(annotation.y_axis);
  win = projectAxisWindow(v, ratio);
  const srcY = rect(
    band.x0,
    band.y0 + win.lo * rectHeight(band),
    band.x1,
    band.y0 + win.hi * rectHeight(band),
  );
  w = rectWidth(srcY) * kx;
  h = rectHeight(srcY) * ky;
  const yStripY0 = fullAxes ? oa.y1 - h : (oa.y0 + oa.y1) / 2 - h / 2;
  const dstY = rect(oa.x0, yStripY0, oa.x0 + w, yStripY0 + h);
  const [yAxisSrc, yAxisDst] = clipPair(srcY, dstY, oa, kx, ky);

  const cornerPair = (
    raw: RectArray | null | undefined,
    anchor: "bottom-right" | "top-left" | "top-right",
  ): [Rect | null, Rect | null] => {
    if (raw == null) return [null, null];
    const r = rectFromArray(raw);
    const cw = rectWidth(r) * kx;
    const ch = rectHeight(r) * ky;
    let dst: Rect;
    if (anchor === "bottom-right") dst = rect(oa.x1 - cw, oa.y1 - ch, oa.x1, oa.y1);
    else if (anchor === "top-left") dst = rect(oa.x0, oa.y0, oa.x0 + cw, oa.y0 + ch);
    else dst = rect(oa.x1 - cw, oa.y0, oa.x1, oa.y0 + ch);
    return clipPair(r, dst, oa, kx, ky);
  };

  const [xTitleSrc, xTitleDst] = cornerPair(annotation.x_axis_title, "bottom-right");
  const [yTitleSrc, yTitleDst] = cornerPair(annotation.y_axis_title, "top-left");
  const [legendSrc, legendDst] = cornerPair(annotation.legend, "top-right");

  return {
    oa,
    x_axis_src: xAxisSrc,
    x_axis_dst: xAxisDst,
    y_axis_src: yAxisSrc,
    y_axis_dst: yAxisDst,
    x_title_src: xTitleSrc,
    x_title_dst: xTitleDst,
    y_title_src: yTitleSrc,
    y_title_dst: yTitleDst,
    legend_src: legendSrc,
    legend_dst: legendDst,
    crosshair: crosshairSegments(oa, settings.crosshair_reach),
    dim_region: dimRegion(oa),
    oa_exceeds_chart: rectWidth(oa) > kx || rectHeight(oa) > ky,
  };
}

export function layoutMinimap(
  pointer: Point,
  settings: MinimapSettings,
  annotation: AnnotationDoc,
  chartRect: Rect,
): MinimapLayout | null {
  if (!settings.enabled) return null;
  if (!containsPoint(chartRect, pointer[0], pointer[1])) return null;

  const oa = oaRect(pointer, settings.oa_width, settings.oa_height);
  let mapW = settings.map_scale * rectWidth(oa);
  const cw = rectWidth(chartRect);
  const ch = rectHeight(chartRect);
  const aspect = cw ? ch / cw : 1;
  let mapH = mapW * aspect;
  if (mapH > rectHeight(oa)) {
    const scale = rectHeight(oa) / mapH;
    mapW *= scale;
    mapH = rectHeight(oa);
  }

  let mx0: number;
  let my0: number;
  if (settings.corner === "top-left") {
    mx0 = oa.x0;
    my0 = oa.y0;
  } else if (settings.corner === "top-right") {
    mx0 = oa.x1 - mapW;
    my0 = oa.y0;
  } else if (settings.corner === "bottom-left") {
    mx0 = oa.x0;
    my0 = oa.y1 - mapH;
  } else {
    mx0 = oa.x1 - mapW;
    my0 = oa.y1 - mapH;
  }
  const mapDst = rect(mx0, my0, mx0 + mapW, my0 + mapH);

  const tx = cw ? (pointer[0] - chartRect.x0) / cw : 0.5;
  const ty = ch ? (pointer[1] - chartRect.y0) / ch : 0.5;
  const cx = clamp(mapDst.x0 + tx * mapW, mapDst.x0, mapDst.x1);
  const cy = clamp(mapDst.y0 + ty * mapH, mapDst.y0, mapDst.y1);

  return {
    oa,
    map_dst: mapDst,
    indicator_center: [cx, cy],
    indicator_radius: settings.indicator_radius * mapW,
    dim_region: dimRegion(oa),
    oa_exceeds_chart: rectWidth(oa) > cw || rectHeight(oa) > ch,
  };
}

// --- layout documents (wire/golden format: 6 decimal places) -------------------

const round6 = (v: number): number => {
  const r = Math.round(v * 1e6) / 1e6;
  return r === 0 ? 0 : r; // normalize -0
};

const rectOut = (r: Rect | null): RectArray | null =>
  r === null ? null : [round6(r.x0), round6(r.y0), round6(r.x1), round6(r.y1)];

const segmentOut = (s: Segment): number[][] => [
  [round6(s[0][0]), round6(s[0][1])],
  [round6(s[1][0]), round6(s[1][1])],
];

export type LayoutDoc = Record<string, unknown>;

export function layoutToDoc(layout: OverlayLayout | MinimapLayout | null): LayoutDoc {
  if (layout === null) return { visible: false };
  if ("map_dst" in layout) {
    return {
      visible: true,
      method: "mini-map",
      oa: rectOut(layout.oa),
      map_dst: rectOut(layout.map_dst),
      indicator_center: [round6(layout.indicator_center[0]), round6(layout.indicator_center[1])],
      indicator_radius: round6(layout.indicator_radius),
      dim_region: layout.dim_region.map(rectOut),
      oa_exceeds_chart: layout.oa_exceeds_chart,
    };
  }
  return {
    visible: true,
    method: "dynamic-context",
    oa: rectOut(layout.oa),
    x_axis_src: rectOut(layout.x_axis_src),
    x_axis_dst: rectOut(layout.x_axis_dst),
    y_axis_src: rectOut(layout.y_axis_src),
    y_axis_dst: rectOut(layout.y_axis_dst),
    x_title_src: rectOut(layout.x_title_src),
    x_title_dst: rectOut(layout.x_title_dst),
    y_title_src: rectOut(layout.y_title_src),
    y_title_dst: rectOut(layout.y_title_dst),
    legend_src: rectOut(layout.legend_src),
    legend_dst: rectOut(layout.legend_dst),
    crosshair: layout.crosshair.map(segmentOut),
    dim_region: layout.dim_region.map(rectOut),
    oa_exceeds_chart: layout.oa_exceeds_chart,
  };
}
