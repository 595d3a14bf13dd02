/**
 * Setting updates with range validation and the left-click enabled toggle.
 * All overlay colors come from these documents, never from theme-inherited
 * styles, so high-contrast themes and inversion filters cannot corrupt them.
 */

import type { MinimapSettings, OverlaySettings } from "./engine.js";

export class SettingError extends Error {}

type Check = (v: unknown) => string | null;

const unitOpen: Check = (v) =>
  typeof v === "number" && v > 0 && v <= 1 ? null : "(0, 1]";
const unitClosed: Check = (v) =>
  typeof v === "number" && v >= 0 && v <= 1 ? null : "[0, 1]";
const nonNegative: Check = (v) => (typeof v === "number" && v >= 0 ? null : ">= 0");
const positive: Check = (v) => (typeof v === "number" && v > 0 ? null : "> 0");
const flag: Check = (v) => (typeof v === "boolean" ? null : "true or false");
const rgba: Check = (v) =>
  Array.isArray(v) && v.length === 4 && v.every((c) => Number.isInteger(c) && c >= 0 && c <= 255)
    ? null
    : "[r, g, b, a] with each channel an integer in 0..255";

const CORNERS = ["top-left", "top-right", "bottom-left", "bottom-right"];
const corner: Check = (v) =>
  typeof v === "string" && CORNERS.includes(v) ? null : `one of ${CORNERS.join("|")}`;

const oaChecks = {
  oa_width: unitOpen,
  oa_height: unitOpen,
  border_thickness: nonNegative,
  border_color: rgba,
  outer_dimming: flag,
  dimming_opacity: unitClosed,
};

export const overlayChecks: Record<keyof OverlaySettings, Check> = {
  ...oaChecks,
  axis_ratio: unitOpen,
  crosshair_thickness: positive,
  crosshair_color: rgba,
  crosshair_opacity: unitClosed,
  crosshair_reach: unitClosed,
  context_enabled: flag,
};

export const minimapChecks: Record<keyof MinimapSettings, Check> = {
  ...oaChecks,
  corner,
  map_scale: unitOpen,
  indicator_radius: unitOpen,
  indicator_fill: rgba,
  enabled: flag,
};

/** Copy of the settings with one field changed; rejects out-of-range values
 * with the legal range in the message (surfaced inline by the panel). */
export function applySetting<S extends OverlaySettings | MinimapSettings>(
  settings: S,
  checks: Record<string, Check>,
  key: string,
  value: unknown,
): S {
  const check = checks[key];
  if (!check) {
    throw new SettingError(`unknown setting '${key}'`);
  }
  const problem = check(value);
  if (problem !== null) {
    throw new SettingError(`${key}: ${JSON.stringify(value)} out of range, expected ${problem}`);
  }
  return { ...settings, [key]: value };
}

/** Left-click toggle: invert the enabled flag only. Two clicks round-trip. */
export function toggleEnabled<S extends OverlaySettings | MinimapSettings>(settings: S): S {
  if ("context_enabled" in settings) {
    return { ...settings, context_enabled: !settings.context_enabled };
  }
  return { ...settings, enabled: !(settings as MinimapSettings).enabled };
}
