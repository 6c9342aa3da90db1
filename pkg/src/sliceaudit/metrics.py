"""Classification metrics used for slice ranking, coloring, and sorting.

All functions are pure and operate on numpy arrays or sequences; callers
share immutable inputs freely. Undefined ratios (zero denominator) are
reported as ``None``, never silently as 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

# Probability clamp keeping log loss finite on degenerate predictions.
PROB_EPS = 1e-15


class UndefinedMetricError(ValueError):
    """A metric was requested on input where it has no defined value."""


@dataclass(frozen=True)
class MetricBundle:
    """Per-group metric set. ``degenerate`` marks any undefined ratio or a
    one-class balanced-accuracy fallback."""

    log_loss: float
    accuracy: float
    balanced_accuracy: float
    precision: Optional[float]
    recall: Optional[float]
    size: int
    degenerate: bool = False


def per_row_log_loss(y_true: np.ndarray, p_pos: np.ndarray) -> np.ndarray:
    """Negative log-likelihood of each row's true label, in nats."""
    p = np.clip(np.asarray(p_pos, dtype=np.float64), PROB_EPS, 1.0 - PROB_EPS)
    y = np.asarray(y_true, dtype=np.float64)
    return -(y * np.log(p) + (1.0 - y) * np.log(1.0 - p))


def log_loss(y_true: Sequence[float], p_pos: Sequence[float]) -> float:
    """Mean negative log-likelihood (nats) of binary labels under p_pos."""
    y = np.asarray(y_true)
    p = np.asarray(p_pos)
    if y.size == 0:
        raise UndefinedMetricError("log_loss is undefined on empty input")
    if y.size != p.size:
        raise UndefinedMetricError(
            f"log_loss inputs differ in length: {y.size} labels vs {p.size} probabilities"
        )
    return float(np.mean(per_row_log_loss(y, p)))


@dataclass(frozen=True)
class ClassificationMetrics:
    accuracy: float
    balanced_accuracy: float
    precision: Optional[float]
    recall: Optional[float]
    degenerate: bool


def classification_metrics(
    y_true: Sequence[int], y_pred: Sequence[int]
) -> ClassificationMetrics:
    """Accuracy, balanced accuracy, precision, and recall from hard labels.

    Balanced accuracy is (TPR + TNR) / 2 when both classes are present; with
    a single true class it falls back to that class's recall and the result
    is flagged degenerate.
    """
    y = np.asarray(y_true, dtype=np.int64)
    yp = np.asarray(y_pred, dtype=np.int64)
    if y.size == 0:
        raise UndefinedMetricError("classification metrics are undefined on empty input")
    if y.size != yp.size:
        raise UndefinedMetricError(
            f"label arrays differ in length: {y.size} vs {yp.size}"
        )
    tp = int(np.count_nonzero((y == 1) & (yp == 1)))
    fp = int(np.count_nonzero((y == 0) & (yp == 1)))
    fn = int(np.count_nonzero((y == 1) & (yp == 0)))
    tn = int(np.count_nonzero((y == 0) & (yp == 0)))
    return classification_from_confusion(tp, fp, fn, tn)


def classification_from_confusion(
    tp: int, fp: int, fn: int, tn: int
) -> ClassificationMetrics:
    """Metrics from confusion counts. Shared by the array path above and the
    slice engine's grouped-count path so both use identical arithmetic."""
    n = tp + fp + fn + tn
    if n == 0:
        raise UndefinedMetricError("classification metrics are undefined on empty input")
    accuracy = (tp + tn) / n
    precision = tp / (tp + fp) if (tp + fp) > 0 else None
    recall = tp / (tp + fn) if (tp + fn) > 0 else None
    tpr = recall
    tnr = tn / (tn + fp) if (tn + fp) > 0 else None

    degenerate = False
    if tpr is not None and tnr is not None:
        balanced = (tpr + tnr) / 2.0
    elif tpr is not None:
        # Only positive ground truth present: fall back to positive recall.
        balanced = tpr
        degenerate = True
    else:
        # Only negative ground truth present: fall back to negative recall.
        balanced = tnr  # type: ignore[assignment]  # n > 0 implies one class exists
        degenerate = True
    if precision is None or recall is None:
        degenerate = True
    return ClassificationMetrics(
        accuracy=accuracy,
        balanced_accuracy=float(balanced),
        precision=precision,
        recall=recall,
        degenerate=degenerate,
    )


def metric_bundle(
    y_true: Sequence[int], p_pos: Sequence[float], y_pred: Sequence[int]
) -> MetricBundle:
    """Full MetricBundle over one group of rows."""
    cm = classification_metrics(y_true, y_pred)
    return MetricBundle(
        log_loss=log_loss(y_true, p_pos),
        accuracy=cm.accuracy,
        balanced_accuracy=cm.balanced_accuracy,
        precision=cm.precision,
        recall=cm.recall,
        size=int(np.asarray(y_true).size),
        degenerate=cm.degenerate,
    )


def pct_diff(slice_value: float, overall_value: float) -> float:
    """Signed percent difference of a slice value against the overall value."""
    if overall_value <= 0:
        raise UndefinedMetricError(
            f"percent difference is undefined for overall value {overall_value!r}"
        )
    return 100.0 * (slice_value - overall_value) / overall_value
