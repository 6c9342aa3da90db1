/** Wire types mirroring the analysis server's JSON responses. */

export type Classification = "underperforming" | "overperforming" | "neutral";

/** Undefined metrics arrive as null; infinite effect sizes as "inf"/"-inf". */
export type WireNumber = number | string | null;

export interface WireMetrics {
  log_loss: WireNumber;
  accuracy: WireNumber;
  balanced_accuracy: WireNumber;
  precision: WireNumber;
  recall: WireNumber;
  size: number;
}

export interface SlicePredicate {
  feature: string;
  value: string;
}

export interface SliceSummary {
  id: string;
  predicates: SlicePredicate[];
  degree: number;
  size: number;
  metrics: WireMetrics;
  effect_size: WireNumber;
  log_loss_pct_diff: WireNumber;
  classification: Classification;
  degenerate: boolean;
}

export interface GraphEdge {
  a: string;
  b: string;
  overlap: number;
}

export interface GraphPayload {
  nodes: string[];
  edges: GraphEdge[];
}

export interface SchemaFeature {
  name: string;
  kind: "categorical" | "continuous";
  values: string[];
}

export interface SchemaPayload {
  features: SchemaFeature[];
  label_column: string;
  row_count: number;
}

export type MetricDim =
  | "log_loss"
  | "log_loss_pct_diff"
  | "effect_size"
  | "size"
  | "accuracy"
  | "balanced_accuracy"
  | "precision"
  | "recall";

export const METRIC_DIMS: MetricDim[] = [
  "log_loss",
  "log_loss_pct_diff",
  "effect_size",
  "size",
  "accuracy",
  "balanced_accuracy",
  "precision",
  "recall",
];

/** Decode a wire numeric: null stays null, "inf"/"-inf" become infinities. */
export function wireToNumber(v: WireNumber): number | null {
  if (v === null) return null;
  if (typeof v === "number") return v;
  if (v === "inf") return Infinity;
  if (v === "-inf") return -Infinity;
  const parsed = Number(v);
  return Number.isNaN(parsed) ? null : parsed;
}

/** Pull one metric dimension out of a summary, decoded. */
export function metricValue(slice: SliceSummary, dim: MetricDim): number | null {
  switch (dim) {
    case "effect_size":
      return wireToNumber(slice.effect_size);
    case "log_loss_pct_diff":
      return wireToNumber(slice.log_loss_pct_diff);
    case "size":
      return slice.size;
    default:
      return wireToNumber(slice.metrics[dim]);
  }
}
