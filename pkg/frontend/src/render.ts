/**
 * Frame rendering split in two: a pure pass from layout document to a
 * display list (testable rect metadata), and a canvas painter that executes
 * the list. The geometry painted is exactly the engine's layout document --
 * the integration tests compare the two field-for-field.
 */

import type {
  AnnotationDoc,
  LayoutDoc,
  MinimapSettings,
  OverlaySettings,
  Point,
  Rect,
  RectArray,
} from "./engine.js";
import {
  layoutDynamicContext,
  layoutMinimap,
  layoutToDoc,
  rect,
} from "./engine.js";

export type Method = "baseline" | "dynamic-context" | "mini-map";

export type PaintOp =
  | { kind: "dim"; rect: RectArray; opacity: number }
  | { kind: "border"; rect: RectArray; thickness: number; color: number[] }
  | { kind: "strip"; element: string; src: RectArray; dst: RectArray }
  | { kind: "line"; from: number[]; to: number[]; thickness: number; color: number[]; opacity: number }
  | { kind: "map"; dst: RectArray }
  | { kind: "indicator"; center: number[]; radius: number; fill: number[] };

const STRIP_ELEMENTS = ["x_axis", "y_axis", "x_title", "y_title", "legend"];

/** Pure render pass: layout document + settings -> ordered paint ops. */
export function displayList(
  doc: LayoutDoc,
  settings: OverlaySettings | MinimapSettings,
): PaintOp[] {
  if (!doc.visible) return [];
  const ops: PaintOp[] = [];
  if (settings.outer_dimming) {
    for (const r of doc.dim_region as RectArray[]) {
      ops.push({ kind: "dim", rect: r, opacity: settings.dimming_opacity });
    }
  }
  if (doc.method === "dynamic-context") {
    const s = settings as OverlaySettings;
    for (const element of STRIP_ELEMENTS) {
      const src = doc[`${element}_src`] as RectArray | null;
      const dst = doc[`${element}_dst`] as RectArray | null;
      if (src && dst) {
        ops.push({ kind: "strip", element, src, dst });
      }
    }
    for (const seg of doc.crosshair as number[][][]) {
      ops.push({
        kind: "line",
        from: seg[0]!,
        to: seg[1]!,
        thickness: s.crosshair_thickness,
        color: s.crosshair_color,
        opacity: s.crosshair_opacity,
      });
    }
  } else {
    const s = settings as MinimapSettings;
    ops.push({ kind: "map", dst: doc.map_dst as RectArray });
    ops.push({
      kind: "indicator",
      center: doc.indicator_center as number[],
      radius: doc.indicator_radius as number,
      fill: s.indicator_fill,
    });
  }
  if (settings.border_thickness > 0) {
    ops.push({
      kind: "border",
      rect: doc.oa as RectArray,
      thickness: settings.border_thickness,
      color: settings.border_color,
    });
  }
  return ops;
}

export interface FrameState {
  method: Method;
  annotation: AnnotationDoc;
  chartRect: Rect;
  overlaySettings: OverlaySettings;
  minimapSettings: MinimapSettings;
}

/** Layout document for the current pointer, from the embedded engine. */
export function frameLayout(state: FrameState, pointer: Point): LayoutDoc {
  if (state.method === "dynamic-context") {
    return layoutToDoc(
      layoutDynamicContext(pointer, state.overlaySettings, state.annotation, state.chartRect),
    );
  }
  if (state.method === "mini-map") {
    return layoutToDoc(
      layoutMinimap(pointer, state.minimapSettings, state.annotation, state.chartRect),
    );
  }
  return { visible: false }; // baseline: no overlay
}

/** Full frame render: pointer -> paint ops (empty when the overlay is hidden). */
export function renderFrame(state: FrameState, pointer: Point): PaintOp[] {
  const doc = frameLayout(state, pointer);
  const settings =
    state.method === "mini-map" ? state.minimapSettings : state.overlaySettings;
  return displayList(doc, settings);
}

// --- canvas painter (DOM glue, exercised in the browser) --------------------------

const rgbaCss = (c: number[], opacity = 1): string =>
  `rgba(${c[0]}, ${c[1]}, ${c[2]}, ${(((c[3] ?? 255) / 255) * opacity).toFixed(3)})`;

/**
 * Execute a display list on a canvas over the chart image. Coordinates are
 * normalized to the canvas; strips are drawn source-rect to dest-rect at
 * identical pixel scale (the engine guarantees the sizes agree).
 */
export function paint(
  ctx: CanvasRenderingContext2D,
  image: CanvasImageSource,
  chartRect: Rect,
  ops: PaintOp[],
  imageWidth: number,
  imageHeight: number,
): void {
  const W = ctx.canvas.width;
  const H = ctx.canvas.height;
  const px = (r: RectArray) => ({
    x: r[0] * W,
    y: r[1] * H,
    w: (r[2] - r[0]) * W,
    h: (r[3] - r[1]) * H,
  });
  for (const op of ops) {
    if (op.kind === "dim") {
      const r = px(op.rect);
      ctx.fillStyle = `rgba(0, 0, 0, ${op.opacity.toFixed(3)})`;
      ctx.fillRect(r.x, r.y, r.w, r.h);
    } else if (op.kind === "strip") {
      const d = px(op.dst);
      ctx.drawImage(
        image,
        op.src[0] * imageWidth,
        op.src[1] * imageHeight,
        (op.src[2] - op.src[0]) * imageWidth,
        (op.src[3] - op.src[1]) * imageHeight,
        d.x,
        d.y,
        d.w,
        d.h,
      );
    } else if (op.kind === "map") {
      const d = px(op.dst);
      ctx.drawImage(image, 0, 0, imageWidth, imageHeight, d.x, d.y, d.w, d.h);
    } else if (op.kind === "indicator") {
      const cx = op.center[0]! * W;
      const cy = op.center[1]! * H;
      const radius = op.radius * W;
      ctx.beginPath();
      ctx.arc(cx, cy, radius, 0, Math.PI * 2);
      ctx.fillStyle = rgbaCss(op.fill);
      ctx.shadowColor = "rgba(0, 0, 0, 0.4)";
      ctx.shadowBlur = 4;
      ctx.fill();
      ctx.shadowBlur = 0;
      ctx.lineWidth = 2;
      ctx.strokeStyle = "#ffffff"; // white border per the indicator style
      ctx.stroke();
    } else if (op.kind === "line") {
      ctx.beginPath();
      ctx.moveTo(op.from[0]! * W, op.from[1]! * H);
      ctx.lineTo(op.to[0]! * W, op.to[1]! * H);
      ctx.lineWidth = op.thickness;
      ctx.strokeStyle = rgbaCss(op.color, op.opacity);
      ctx.stroke();
    } else if (op.kind === "border") {
      const r = px(op.rect);
      ctx.lineWidth = op.thickness;
      ctx.strokeStyle = rgbaCss(op.color);
      ctx.strokeRect(r.x, r.y, r.w, r.h);
    }
  }
}

export { rect };
