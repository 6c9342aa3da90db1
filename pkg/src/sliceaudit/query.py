"""User-facing filter/sort queries over an immutable slice list, plus the
stable JSON wire format the UI consumes.

Serialization uses fixed key order, compact separators, and Python's
shortest round-trip float rendering so output is byte-stable for golden
tests. Undefined metrics serialize as null; infinite effect sizes as the
strings "inf"/"-inf" (strict JSON has no Infinity literal).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .engine import OVERPERFORMING, UNDERPERFORMING, SliceStats
from .graph import OverlapGraph
from .metrics import MetricBundle

SORT_DIMENSIONS = (
    "log_loss",
    "log_loss_pct_diff",
    "effect_size",
    "size",
    "accuracy",
    "balanced_accuracy",
    "precision",
    "recall",
)

# These rank "worst first" when sorted descending regardless of view; the
# accuracy-family dimensions flip direction with the performance class.
_ALWAYS_DESCENDING = frozenset(
    {"log_loss", "log_loss_pct_diff", "effect_size", "size"}
)

PERFORMANCE_CLASSES = (UNDERPERFORMING, OVERPERFORMING)


class QueryValidationError(ValueError):
    """A query referenced an unknown option or violated a bound."""


@dataclass(frozen=True)
class SliceQuery:
    sort_by: str = "effect_size"
    top_k: Optional[int] = None  # None = ALL
    min_size: int = 1
    features_include: frozenset[str] = field(default_factory=frozenset)
    performance_class: str = UNDERPERFORMING
    min_overlap: int = 1  # graph requests only


@dataclass(frozen=True)
class SliceSummary:
    id: str
    predicates: tuple[tuple[str, str], ...]  # (feature, value) pairs
    degree: int
    size: int
    metrics: MetricBundle
    effect_size: Optional[float]
    log_loss_pct_diff: float
    classification: str
    degenerate: bool


def make_summary(stats: SliceStats) -> SliceSummary:
    effect = stats.effect_size
    return SliceSummary(
        id=stats.definition.id,
        predicates=stats.definition.terms,
        degree=stats.definition.degree,
        size=stats.size,
        metrics=stats.metrics,
        effect_size=effect,
        log_loss_pct_diff=stats.log_loss_pct_diff,
        classification=stats.classification,
        degenerate=stats.metrics.degenerate
        or effect is None
        or math.isinf(effect),
    )


def parse_slice_id(slice_id: str) -> tuple[tuple[str, str], ...]:
    """Inverse of the canonical id: "f1:v1|f2:v2" -> ((f1, v1), (f2, v2)).

    Feature names never contain ':' or '|'; value labels containing '|'
    are not representable and are rejected at ingest-side id construction.
    """
    terms = []
    for term in slice_id.split("|"):
        name, sep, value = term.partition(":")
        if not sep:
            raise QueryValidationError(f"malformed slice id term {term!r}")
        terms.append((name, value))
    return tuple(terms)


def _validate(q: SliceQuery, feature_names: Optional[Sequence[str]]) -> None:
    if q.sort_by not in SORT_DIMENSIONS:
        raise QueryValidationError(
            f"unknown sort dimension {q.sort_by!r}; valid options: "
            + ", ".join(SORT_DIMENSIONS)
        )
    if q.performance_class not in PERFORMANCE_CLASSES:
        raise QueryValidationError(
            f"unknown performance class {q.performance_class!r}; valid options: "
            + ", ".join(PERFORMANCE_CLASSES)
        )
    if q.top_k is not None and q.top_k < 1:
        raise QueryValidationError(f"top_k must be >= 1 or ALL, got {q.top_k}")
    if q.min_size < 1:
        raise QueryValidationError(f"min_size must be >= 1, got {q.min_size}")
    if q.min_overlap < 1:
        raise QueryValidationError(f"min_overlap must be >= 1, got {q.min_overlap}")
    if q.features_include and feature_names is not None:
        unknown = sorted(set(q.features_include) - set(feature_names))
        if unknown:
            raise QueryValidationError(
                f"unknown feature name(s) {', '.join(unknown)}; valid options: "
                + ", ".join(feature_names)
            )


def _sort_value(s: SliceStats, dim: str) -> Optional[float]:
    if dim == "log_loss":
        return s.metrics.log_loss
    if dim == "log_loss_pct_diff":
        return s.log_loss_pct_diff
    if dim == "effect_size":
        return s.effect_size
    if dim == "size":
        return float(s.size)
    if dim == "accuracy":
        return s.metrics.accuracy
    if dim == "balanced_accuracy":
        return s.metrics.balanced_accuracy
    if dim == "precision":
        return s.metrics.precision
    if dim == "recall":
        return s.metrics.recall
    raise QueryValidationError(f"unknown sort dimension {dim!r}")


def query_stats(
    slices: Sequence[SliceStats],
    q: SliceQuery,
    feature_names: Optional[Sequence[str]] = None,
) -> list[SliceStats]:
    """apply_query, but returning the underlying SliceStats (the graph
    endpoint needs memberships for the filtered set)."""
    _validate(q, feature_names)
    kept = [s for s in slices if s.classification == q.performance_class]
    kept = [s for s in kept if s.size >= q.min_size]
    if q.features_include:
        kept = [
            s
            for s in kept
            if q.features_include.intersection(name for name, _ in s.definition.terms)
        ]
    descending = q.sort_by in _ALWAYS_DESCENDING or q.performance_class == OVERPERFORMING

    def key(s: SliceStats) -> tuple:
        v = _sort_value(s, q.sort_by)
        if v is None:
            return (1, 0.0, s.definition.id)
        return (0, -v if descending else v, s.definition.id)

    kept.sort(key=key)
    if q.top_k is not None:
        kept = kept[: q.top_k]
    return kept


def apply_query(
    slices: Sequence[SliceStats],
    q: SliceQuery,
    feature_names: Optional[Sequence[str]] = None,
) -> list[SliceSummary]:
    """Filter by performance class, minimum size, and feature interest;
    sort worst-first for the selected view; truncate to top_k."""
    return [make_summary(s) for s in query_stats(slices, q, feature_names)]


def _encode_float(v: Optional[float]) -> Union[float, str, None]:
    if v is None:
        return None
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return float(v)


def metrics_to_dict(b: MetricBundle) -> dict:
    return {
        "log_loss": _encode_float(b.log_loss),
        "accuracy": _encode_float(b.accuracy),
        "balanced_accuracy": _encode_float(b.balanced_accuracy),
        "precision": _encode_float(b.precision),
        "recall": _encode_float(b.recall),
        "size": b.size,
    }


def summary_to_dict(s: SliceSummary) -> dict:
    return {
        "id": s.id,
        "predicates": [{"feature": f, "value": v} for f, v in s.predicates],
        "degree": s.degree,
        "size": s.size,
        "metrics": metrics_to_dict(s.metrics),
        "effect_size": _encode_float(s.effect_size),
        "log_loss_pct_diff": _encode_float(s.log_loss_pct_diff),
        "classification": s.classification,
        "degenerate": s.degenerate,
    }


def graph_to_dict(graph: OverlapGraph) -> dict:
    return {
        "nodes": list(graph.node_ids),
        "edges": [{"a": e.a, "b": e.b, "overlap": e.overlap} for e in graph.edges],
    }


def canonical_json(obj: object) -> str:
    """Byte-stable rendering: fixed key order (dict insertion), compact
    separators, shortest round-trip floats, no NaN/Infinity literals."""
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"), allow_nan=False)


_dumps = canonical_json


def serialize_summaries(summaries: Sequence[SliceSummary]) -> str:
    return _dumps([summary_to_dict(s) for s in summaries])


def serialize_summary(summary: SliceSummary) -> str:
    return _dumps(summary_to_dict(summary))


def serialize_overall(overall: MetricBundle) -> str:
    return _dumps(metrics_to_dict(overall))


def serialize_graph(graph: OverlapGraph) -> str:
    return _dumps(graph_to_dict(graph))


def serialize_analysis(
    summaries: Sequence[SliceSummary],
    overall: MetricBundle,
    graph: Optional[OverlapGraph] = None,
    config: Optional[dict] = None,
) -> str:
    doc: dict = {
        "overall": metrics_to_dict(overall),
        "slices": [summary_to_dict(s) for s in summaries],
    }
    if graph is not None:
        doc["graph"] = graph_to_dict(graph)
    if config is not None:
        doc["config"] = config
    return _dumps(doc)
