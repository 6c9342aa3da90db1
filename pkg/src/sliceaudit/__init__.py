"""sliceaudit: find, rank, and explore under- and over-performing data
slices (conjunctions of up to two feature predicates) of a binary
classifier's predictions."""

from .engine import (
    NEUTRAL,
    OVERPERFORMING,
    UNDERPERFORMING,
    FeatureIndex,
    Predicate,
    SliceDef,
    SliceStats,
    build_index,
    effect_size,
    enumerate_slices,
    overall_metrics,
)
from .graph import OverlapEdge, OverlapGraph, build_graph, filter_graph
from .ingest import (
    MISSING,
    ColumnSchema,
    Dataset,
    IngestError,
    PredictionSet,
    bin_continuous,
    load_dataset,
    load_predictions,
)
from .metrics import (
    MetricBundle,
    UndefinedMetricError,
    classification_metrics,
    log_loss,
    metric_bundle,
    pct_diff,
)
from .query import (
    QueryValidationError,
    SliceQuery,
    SliceSummary,
    apply_query,
    make_summary,
    serialize_analysis,
)
from .server import AnalysisConfig, AnalysisSnapshot, create_app, run_analysis

__version__ = "0.1.0"

__all__ = [
    "AnalysisConfig",
    "AnalysisSnapshot",
    "ColumnSchema",
    "Dataset",
    "FeatureIndex",
    "IngestError",
    "MISSING",
    "MetricBundle",
    "NEUTRAL",
    "OVERPERFORMING",
    "OverlapEdge",
    "OverlapGraph",
    "Predicate",
    "PredictionSet",
    "QueryValidationError",
    "SliceDef",
    "SliceQuery",
    "SliceStats",
    "SliceSummary",
    "UNDERPERFORMING",
    "UndefinedMetricError",
    "apply_query",
    "bin_continuous",
    "build_graph",
    "build_index",
    "classification_metrics",
    "create_app",
    "effect_size",
    "enumerate_slices",
    "filter_graph",
    "load_dataset",
    "load_predictions",
    "log_loss",
    "make_summary",
    "metric_bundle",
    "overall_metrics",
    "pct_diff",
    "run_analysis",
    "serialize_analysis",
]
