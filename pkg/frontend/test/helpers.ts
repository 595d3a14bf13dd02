import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";

import type { AnnotationDoc, LayoutDoc, RectArray } from "../src/engine.js";

export interface GoldenCase {
  method: "dynamic-context" | "mini-map";
  settings: Record<string, unknown>;
  pointer: [number, number];
  layout: LayoutDoc;
}

export interface GoldenFile {
  chart_id: string;
  annotation: AnnotationDoc;
  chart_rect: RectArray;
  cases: GoldenCase[];
}

export function loadGolden(): GoldenFile {
  const path = fileURLToPath(new URL("./fixtures/golden_layouts.json", import.meta.url));
  return JSON.parse(readFileSync(path, "utf-8")) as GoldenFile;
}

/** Field-for-field comparison at the 6-decimal export convention. */
export function docsAgree(got: unknown, want: unknown, path = "doc"): string | null {
  if (typeof want === "number" && typeof got === "number") {
    // golden values are quantized to 1e-6; allow exactly that much slack
    return Math.abs(got - want) <= 1.000001e-6 ? null : `${path}: ${got} != ${want}`;
  }
  if (Array.isArray(want)) {
    if (!Array.isArray(got) || got.length !== want.length) {
      return `${path}: array shape mismatch`;
    }
    for (let i = 0; i < want.length; i++) {
      const problem = docsAgree(got[i], want[i], `${path}[${i}]`);
      if (problem) return problem;
    }
    return null;
  }
  if (want !== null && typeof want === "object") {
    const wantObj = want as Record<string, unknown>;
    const gotObj = got as Record<string, unknown>;
    if (got === null || typeof got !== "object") return `${path}: expected object`;
    const wantKeys = Object.keys(wantObj).sort();
    const gotKeys = Object.keys(gotObj).sort();
    if (wantKeys.join(",") !== gotKeys.join(",")) {
      return `${path}: keys [${gotKeys}] != [${wantKeys}]`;
    }
    for (const key of wantKeys) {
      const problem = docsAgree(gotObj[key], wantObj[key], `${path}.${key}`);
      if (problem) return problem;
    }
    return null;
  }
  return Object.is(got, want) ? null : `${path}: ${String(got)} != ${String(want)}`;
}
