/** Scene model: the pure mapping from API payloads + view state to drawable
 * nodes and edges. The DOM layer renders this verbatim; every displayed
 * number originates in the API response. */

import { anchorKey } from "./forces";
import {
  colorForDarkness,
  darknessFor,
  edgeWidthFor,
  finiteExtent,
  radiusForSize,
  radiusForValue,
} from "./scales";
import { ViewState } from "./state";
import { GraphEdge, MetricDim, SliceSummary, metricValue } from "./types";

export interface SceneNode {
  id: string;
  slice: SliceSummary;
  radius: number;
  color: string;
  anchorKey: string;
}

export interface SceneEdge {
  a: string;
  b: string;
  overlap: number;
  width: number;
}

export interface Scene {
  nodes: SceneNode[];
  edges: SceneEdge[];
  /** Non-null when there is nothing to draw. */
  placeholder: string | null;
}

function nodeRadius(
  slice: SliceSummary,
  dim: MetricDim,
  slices: SliceSummary[]
): number {
  if (dim === "size") {
    const sizes = slices.map((s) => s.size);
    return radiusForSize(slice.size, Math.min(...sizes), Math.max(...sizes));
  }
  const extent = finiteExtent(slices.map((s) => metricValue(s, dim)));
  if (extent === null) return radiusForValue(null, 0, 0);
  return radiusForValue(metricValue(slice, dim), extent.min, extent.max);
}

export function buildScene(
  slices: SliceSummary[],
  edges: GraphEdge[],
  state: ViewState
): Scene {
  if (slices.length === 0) {
    return { nodes: [], edges: [], placeholder: "no slices match filters" };
  }
  const colorExtent = finiteExtent(slices.map((s) => metricValue(s, state.colorBy)));
  const nodes: SceneNode[] = slices.map((slice) => ({
    id: slice.id,
    slice,
    radius: nodeRadius(slice, state.sizeBy, slices),
    color: colorForDarkness(
      colorExtent === null
        ? null
        : darknessFor(
            metricValue(slice, state.colorBy),
            colorExtent.min,
            colorExtent.max,
            state.colorBy,
            state.overperforming
          )
    ),
    anchorKey: anchorKey(slice),
  }));

  let sceneEdges: SceneEdge[] = [];
  if (state.layout === "graph") {
    const known = new Set(nodes.map((n) => n.id));
    const visible = edges.filter(
      (e) => e.overlap >= state.edgeMinOverlap && known.has(e.a) && known.has(e.b)
    );
    if (visible.length > 0) {
      const overlaps = visible.map((e) => e.overlap);
      const oMin = Math.min(...overlaps);
      const oMax = Math.max(...overlaps);
      sceneEdges = visible.map((e) => ({
        a: e.a,
        b: e.b,
        overlap: e.overlap,
        width: edgeWidthFor(e.overlap, oMin, oMax),
      }));
    }
  }
  return { nodes, edges: sceneEdges, placeholder: null };
}

/** Tooltip lines for a node, echoing API values verbatim. */
export function tooltipLines(slice: SliceSummary): string[] {
  const fmt = (v: unknown) => (v === null ? "undefined" : String(v));
  return [
    slice.predicates.map((p) => `${p.feature} = ${p.value}`).join("  AND  "),
    `classification: ${slice.classification}${slice.degenerate ? " (degenerate)" : ""}`,
    `size: ${slice.size}`,
    `effect size: ${fmt(slice.effect_size)}`,
    `log loss: ${fmt(slice.metrics.log_loss)}`,
    `log loss vs overall: ${fmt(slice.log_loss_pct_diff)}%`,
    `accuracy: ${fmt(slice.metrics.accuracy)}`,
    `balanced accuracy: ${fmt(slice.metrics.balanced_accuracy)}`,
    `precision: ${fmt(slice.metrics.precision)}`,
    `recall: ${fmt(slice.metrics.recall)}`,
  ];
}
