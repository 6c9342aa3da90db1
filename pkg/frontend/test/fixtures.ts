import { GraphEdge, SliceSummary, WireMetrics } from "../src/types";

export function metrics(size: number, logLoss: number): WireMetrics {
  return {
    log_loss: logLoss,
    accuracy: 0.8,
    balanced_accuracy: 0.75,
    precision: 0.7,
    recall: 0.6,
    size,
  };
}

export function slice(
  id: string,
  size: number,
  effect: number | string | null,
  pctDiff = 10.0
): SliceSummary {
  const predicates = id.split("|").map((term) => {
    const [feature, value] = term.split(":", 2);
    return { feature, value };
  });
  return {
    id,
    predicates,
    degree: predicates.length,
    size,
    metrics: metrics(size, 0.4),
    effect_size: effect,
    log_loss_pct_diff: pctDiff,
    classification: "underperforming",
    degenerate: effect === null,
  };
}

export function edge(a: string, b: string, overlap: number): GraphEdge {
  return { a, b, overlap };
}
