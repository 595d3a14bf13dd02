import { describe, expect, it } from "vitest";

import { defaultMinimapSettings, defaultOverlaySettings, rectFromArray } from "../src/engine.js";
import { displayList, frameLayout, renderFrame, type FrameState } from "../src/render.js";
import { applySetting, overlayChecks, toggleEnabled, SettingError } from "../src/settings.js";
import { docsAgree, loadGolden } from "./helpers.js";

const golden = loadGolden();

function makeState(method: FrameState["method"]): FrameState {
  return {
    method,
    annotation: golden.annotation,
    chartRect: rectFromArray(golden.chart_rect),
    overlaySettings: defaultOverlaySettings(),
    minimapSettings: defaultMinimapSettings(),
  };
}

describe("painted overlay metadata equals the engine layout document", () => {
  it("strip ops carry exactly the layout's src/dst rects over a scripted path", () => {
    const defaults = JSON.stringify(defaultOverlaySettings());
    const cases = golden.cases.filter(
      (c) => c.method === "dynamic-context" && JSON.stringify(c.settings) === defaults,
    );
    expect(cases.length).toBeGreaterThan(5);
    const state = makeState("dynamic-context");
    for (const testCase of cases) {
      const doc = frameLayout(state, testCase.pointer);
      expect(docsAgree(doc, testCase.layout)).toBeNull();
      const ops = displayList(doc, state.overlaySettings);
      if (!testCase.layout.visible) {
        expect(ops).toEqual([]);
        continue;
      }
      for (const element of ["x_axis", "y_axis", "legend"]) {
        const want = testCase.layout[`${element}_dst`];
        const op = ops.find((o) => o.kind === "strip" && o.element === element);
        if (want == null) {
          expect(op).toBeUndefined();
        } else {
          expect(op && op.kind === "strip" && docsAgree(op.dst, want)).toBeNull();
          expect(
            op && op.kind === "strip" && docsAgree(op.src, testCase.layout[`${element}_src`]),
          ).toBeNull();
        }
      }
      // crosshair lines match the layout segments 1:1
      const lines = ops.filter((o) => o.kind === "line");
      expect(docsAgree(lines.map((l) => l.kind === "line" && [l.from, l.to]),
                       testCase.layout.crosshair)).toBeNull();
      // dimming layer present and equal to the layout's dim region
      const dims = ops.filter((o) => o.kind === "dim");
      expect(docsAgree(dims.map((d) => d.kind === "dim" && d.rect),
                       testCase.layout.dim_region)).toBeNull();
    }
  });

  it("minimap ops carry the map rect and indicator from the layout", () => {
    const defaults = JSON.stringify(defaultMinimapSettings());
    const cases = golden.cases.filter(
      (c) => c.method === "mini-map" && c.layout.visible && JSON.stringify(c.settings) === defaults,
    );
    expect(cases.length).toBeGreaterThan(5);
    const state = makeState("mini-map");
    for (const testCase of cases) {
      const ops = renderFrame(state, testCase.pointer);
      const map = ops.find((o) => o.kind === "map");
      const indicator = ops.find((o) => o.kind === "indicator");
      expect(map && map.kind === "map" && docsAgree(map.dst, testCase.layout.map_dst)).toBeNull();
      expect(
        indicator &&
          indicator.kind === "indicator" &&
          docsAgree(indicator.center, testCase.layout.indicator_center),
      ).toBeNull();
    }
  });

  it("baseline method paints no overlay", () => {
    expect(renderFrame(makeState("baseline"), [0.5, 0.5])).toEqual([]);
  });

  it("pointer off the chart hides the overlay", () => {
    expect(renderFrame(makeState("dynamic-context"), [1.4, 0.5])).toEqual([]);
  });
});

describe("left-click toggle", () => {
  it("hides the overlay and a second click restores the original state", () => {
    const state = makeState("dynamic-context");
    const before = renderFrame(state, [0.5, 0.5]);
    expect(before.length).toBeGreaterThan(0);

    state.overlaySettings = toggleEnabled(state.overlaySettings);
    expect(renderFrame(state, [0.5, 0.5])).toEqual([]);

    state.overlaySettings = toggleEnabled(state.overlaySettings);
    expect(state.overlaySettings).toEqual(defaultOverlaySettings());
    expect(renderFrame(state, [0.5, 0.5])).toEqual(before);
  });

  it("round-trips for the minimap too", () => {
    const state = makeState("mini-map");
    const once = toggleEnabled(state.minimapSettings);
    expect(once.enabled).toBe(false);
    expect(toggleEnabled(once)).toEqual(state.minimapSettings);
  });
});

describe("settings panel behavior", () => {
  it("changes are visible in the very next frame", () => {
    const state = makeState("dynamic-context");
    const before = frameLayout(state, [0.5, 0.5]);
    state.overlaySettings = applySetting(
      state.overlaySettings, overlayChecks, "axis_ratio", 0.8);
    const after = frameLayout(state, [0.5, 0.5]);
    const width = (r: unknown) => {
      const a = r as number[];
      return a[2]! - a[0]!;
    };
    expect(width(after.x_axis_dst)).toBeGreaterThan(width(before.x_axis_dst));
  });

  it("rejects out-of-range values naming the legal range", () => {
    const state = makeState("dynamic-context");
    expect(() =>
      applySetting(state.overlaySettings, overlayChecks, "axis_ratio", 1.7),
    ).toThrowError(/\(0, 1\]/);
    expect(() =>
      applySetting(state.overlaySettings, overlayChecks, "nope", 1),
    ).toThrowError(SettingError);
  });

  it("dimming can be turned off, removing the dim layer only", () => {
    const state = makeState("dynamic-context");
    state.overlaySettings = applySetting(
      state.overlaySettings, overlayChecks, "outer_dimming", false);
    const ops = renderFrame(state, [0.5, 0.5]);
    expect(ops.filter((o) => o.kind === "dim")).toEqual([]);
    expect(ops.filter((o) => o.kind === "strip").length).toBeGreaterThan(0);
  });
});
