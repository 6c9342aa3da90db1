/** Size, width, and color encodings. Pure functions over decoded metric
 * values; anything undefined gets the neutral treatment. */

import {
  COLOR_DARK,
  COLOR_LIGHT,
  COLOR_UNDEFINED,
  EDGE_WIDTH_FLAT,
  EDGE_WIDTH_MAX,
  EDGE_WIDTH_MIN,
  R_MAX,
  R_MIN,
} from "./config";
import { MetricDim } from "./types";

/** Sample-size radius, standardized on a log scale:
 * r_min + (r_max - r_min) * (ln s - ln s_min) / (ln s_max - ln s_min).
 * All-equal sizes degenerate to r_min. */
export function radiusForSize(size: number, sMin: number, sMax: number): number {
  if (!(sMax > sMin)) return R_MIN;
  const t = (Math.log(size) - Math.log(sMin)) / (Math.log(sMax) - Math.log(sMin));
  return R_MIN + (R_MAX - R_MIN) * clamp01(t);
}

/** Radius for non-size dimensions: linear over the finite extent. */
export function radiusForValue(
  value: number | null,
  vMin: number,
  vMax: number
): number {
  if (value === null) return R_MIN;
  if (!(vMax > vMin)) return R_MIN;
  return R_MIN + (R_MAX - R_MIN) * clamp01(normalize(value, vMin, vMax));
}

/** Edge width: linear map of overlap onto [1px, 8px]; a flat distribution
 * (all overlaps equal) maps to the midpoint. */
export function edgeWidthFor(overlap: number, oMin: number, oMax: number): number {
  if (!(oMax > oMin)) return EDGE_WIDTH_FLAT;
  return (
    EDGE_WIDTH_MIN +
    (EDGE_WIDTH_MAX - EDGE_WIDTH_MIN) * clamp01((overlap - oMin) / (oMax - oMin))
  );
}

function clamp01(t: number): number {
  if (Number.isNaN(t)) return 0;
  return Math.min(1, Math.max(0, t));
}

function normalize(value: number, vMin: number, vMax: number): number {
  if (value === Infinity) return 1;
  if (value === -Infinity) return 0;
  return (value - vMin) / (vMax - vMin);
}

/** Dimensions where a high value means worse model performance. */
const BAD_WHEN_HIGH: ReadonlySet<MetricDim> = new Set([
  "log_loss",
  "log_loss_pct_diff",
  "effect_size",
]);

/** Darkness in [0, 1]: darker = worse in the underperforming view, darker =
 * better (more overperforming) in the overperforming view. Size ignores the
 * view and just darkens with magnitude. */
export function darknessFor(
  value: number | null,
  vMin: number,
  vMax: number,
  dim: MetricDim,
  overperforming: boolean
): number | null {
  if (value === null) return null;
  if (!(vMax > vMin)) return 0.5;
  const t = clamp01(normalize(value, vMin, vMax));
  if (dim === "size") return t;
  const highIsBad = BAD_WHEN_HIGH.has(dim);
  // Underperforming view: dark = bad. Overperforming view: dark = good.
  const darkWhenHigh = overperforming ? !highIsBad : highIsBad;
  return darkWhenHigh ? t : 1 - t;
}

export function colorForDarkness(t: number | null): string {
  if (t === null) return COLOR_UNDEFINED;
  const channel = (i: number) =>
    Math.round(COLOR_LIGHT[i] + (COLOR_DARK[i] - COLOR_LIGHT[i]) * clamp01(t));
  return `rgb(${channel(0)},${channel(1)},${channel(2)})`;
}

export interface Extent {
  min: number;
  max: number;
}

/** Extent over the finite values only; null when nothing is finite. */
export function finiteExtent(values: Array<number | null>): Extent | null {
  let min = Infinity;
  let max = -Infinity;
  for (const v of values) {
    if (v === null || !Number.isFinite(v)) continue;
    if (v < min) min = v;
    if (v > max) max = v;
  }
  if (min === Infinity) return null;
  return { min, max };
}
