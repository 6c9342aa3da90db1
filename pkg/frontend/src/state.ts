/** View state and its pure mappings: state -> API query string and
 * state <-> URL hash. Every rendered number comes from the API; this module
 * only decides what to ask for. */

import { MAX_TOP_K } from "./config";
import { METRIC_DIMS, MetricDim } from "./types";

export type Layout = "force" | "graph";

export interface ViewState {
  layout: Layout;
  colorBy: MetricDim;
  sizeBy: MetricDim;
  sortBy: MetricDim;
  topK: number;
  minSize: number;
  features: string[]; // selected feature names; empty = no constraint
  overperforming: boolean;
  edgeForceStrength: number; // [0, 1]
  edgeMinOverlap: number; // client-side edge filter, no refetch
}

export const DEFAULT_STATE: ViewState = {
  layout: "force",
  colorBy: "log_loss_pct_diff",
  sizeBy: "size",
  sortBy: "effect_size",
  topK: 50,
  minSize: 1,
  features: [],
  overperforming: false,
  edgeForceStrength: 0.5,
  edgeMinOverlap: 1,
};

/** Fields whose change requires fresh data from the server. The edge and
 * color/size encodings re-render locally. */
const REFETCH_FIELDS: ReadonlySet<keyof ViewState> = new Set([
  "layout",
  "sortBy",
  "topK",
  "minSize",
  "features",
  "overperforming",
]);

export function needsRefetch(field: keyof ViewState): boolean {
  return REFETCH_FIELDS.has(field);
}

export interface TopKResult {
  topK: number;
  notice: string | null;
}

/** The UI caps top-k at MAX_TOP_K to keep rendering interactive. */
export function clampTopK(requested: number): TopKResult {
  const k = Math.max(1, Math.floor(requested));
  if (k > MAX_TOP_K) {
    return {
      topK: MAX_TOP_K,
      notice: `top k capped at ${MAX_TOP_K} for interactive rendering`,
    };
  }
  return { topK: k, notice: null };
}

export function performanceClass(state: ViewState): string {
  return state.overperforming ? "overperforming" : "underperforming";
}

/** Query string for /api/slices. Pure: same state, same string. */
export function sliceQueryString(state: ViewState): string {
  const params = new URLSearchParams();
  params.set("sort_by", state.sortBy);
  params.set("top_k", String(state.topK));
  params.set("min_size", String(state.minSize));
  if (state.features.length > 0) {
    params.set("features", [...state.features].sort().join(","));
  }
  params.set("class", performanceClass(state));
  return params.toString();
}

/** Query string for /api/graph. All edges are fetched (min_overlap=1);
 * the Edge Filtering slider re-filters client-side without a refetch. */
export function graphQueryString(state: ViewState): string {
  const params = new URLSearchParams(sliceQueryString(state));
  params.set("min_overlap", "1");
  return params.toString();
}

/** The deterministic request plan for a state: slices always, edges only in
 * graph layout. */
export function requestPlan(state: ViewState): string[] {
  const plan = [`/api/slices?${sliceQueryString(state)}`];
  if (state.layout === "graph") {
    plan.push(`/api/graph?${graphQueryString(state)}`);
  }
  return plan;
}

const HASH_KEYS: Record<string, keyof ViewState> = {
  layout: "layout",
  color: "colorBy",
  size: "sizeBy",
  sort: "sortBy",
  top_k: "topK",
  min_size: "minSize",
  features: "features",
  over: "overperforming",
  edge_force: "edgeForceStrength",
  edge_min_overlap: "edgeMinOverlap",
};

/** Encode the full state into a shareable location.hash fragment. */
export function encodeHash(state: ViewState): string {
  const params = new URLSearchParams();
  params.set("layout", state.layout);
  params.set("color", state.colorBy);
  params.set("size", state.sizeBy);
  params.set("sort", state.sortBy);
  params.set("top_k", String(state.topK));
  params.set("min_size", String(state.minSize));
  if (state.features.length > 0) {
    params.set("features", [...state.features].sort().join(","));
  }
  params.set("over", state.overperforming ? "1" : "0");
  params.set("edge_force", String(state.edgeForceStrength));
  params.set("edge_min_overlap", String(state.edgeMinOverlap));
  return params.toString();
}

function isMetricDim(v: string): v is MetricDim {
  return (METRIC_DIMS as string[]).includes(v);
}

/** Decode a hash fragment, falling back to defaults for anything missing
 * or malformed. Inverse of encodeHash for well-formed states. */
export function decodeHash(hash: string): ViewState {
  const state: ViewState = { ...DEFAULT_STATE, features: [] };
  const trimmed = hash.startsWith("#") ? hash.slice(1) : hash;
  if (!trimmed) return state;
  const params = new URLSearchParams(trimmed);
  for (const [key, raw] of params.entries()) {
    const field = HASH_KEYS[key];
    if (!field) continue;
    switch (field) {
      case "layout":
        if (raw === "force" || raw === "graph") state.layout = raw;
        break;
      case "colorBy":
      case "sizeBy":
      case "sortBy":
        if (isMetricDim(raw)) state[field] = raw;
        break;
      case "topK": {
        const k = Number(raw);
        if (Number.isFinite(k) && k >= 1) state.topK = clampTopK(k).topK;
        break;
      }
      case "minSize": {
        const m = Number(raw);
        if (Number.isFinite(m) && m >= 1) state.minSize = Math.floor(m);
        break;
      }
      case "features":
        state.features = raw.split(",").filter((f) => f.length > 0);
        break;
      case "overperforming":
        state.overperforming = raw === "1" || raw === "true";
        break;
      case "edgeForceStrength": {
        const s = Number(raw);
        if (Number.isFinite(s)) state.edgeForceStrength = Math.min(1, Math.max(0, s));
        break;
      }
      case "edgeMinOverlap": {
        const o = Number(raw);
        if (Number.isFinite(o) && o >= 1) state.edgeMinOverlap = Math.floor(o);
        break;
      }
    }
  }
  return state;
}
