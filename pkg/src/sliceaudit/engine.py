"""Slice enumeration: membership, metrics, and effect sizes for every
conjunction of at most two feature predicates.

Row memberships are fixed-width bitsets backed by Python ints (bit i set
iff row i belongs), so intersection is ``&`` and popcount is
``int.bit_count()``. Per-slice sums are computed columnar-style with one
grouped pass per feature (pair) rather than per slice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .ingest import MISSING, Dataset, PredictionSet
from .metrics import (
    MetricBundle,
    classification_from_confusion,
    metric_bundle,
    pct_diff,
    per_row_log_loss,
)

UNDERPERFORMING = "underperforming"
OVERPERFORMING = "overperforming"
NEUTRAL = "neutral"

DEFAULT_EFFECT_THRESHOLD = 0.4


class EngineError(ValueError):
    """Raised for inputs the slice engine cannot analyze."""


class UndefinedEffectError(ValueError):
    """Effect size requested where either group has fewer than 2 rows."""


def bitset_from_mask(mask: np.ndarray) -> int:
    """Pack a boolean row mask into an int bitset (bit i = row i)."""
    return int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little")


@dataclass(frozen=True)
class Predicate:
    feature_index: int
    value_index: int


@dataclass(frozen=True)
class SliceDef:
    """Conjunction of 1 or 2 predicates over distinct features.

    ``terms`` holds the resolved (feature name, value label) pairs in
    sorted order; ``id`` is the canonical "feature:value" terms joined
    by "|" in that order.
    """

    predicates: tuple[Predicate, ...]
    terms: tuple[tuple[str, str], ...]
    id: str

    @property
    def degree(self) -> int:
        return len(self.predicates)


@dataclass(frozen=True)
class SliceStats:
    definition: SliceDef
    membership: int  # row bitset
    size: int
    metrics: MetricBundle
    effect_size: Optional[float]  # None when undefined; may be +/-inf
    log_loss_pct_diff: float
    classification: str


@dataclass(frozen=True)
class FeatureIndex:
    """Per-(feature, value) row membership bitsets.

    For a fixed feature the bitsets are pairwise disjoint and their union
    covers exactly the rows where that feature is not missing.
    """

    bitsets: tuple[tuple[int, ...], ...]
    row_count: int

    def bitset(self, feature_index: int, value_index: int) -> int:
        return self.bitsets[feature_index][value_index]


def build_index(dataset: Dataset) -> FeatureIndex:
    if dataset.row_count == 0:
        raise EngineError("cannot index a dataset with no rows")
    per_feature = []
    for f, schema in enumerate(dataset.schemas):
        column = dataset.encoded[:, f]
        per_feature.append(
            tuple(bitset_from_mask(column == v) for v in range(schema.cardinality))
        )
    return FeatureIndex(bitsets=tuple(per_feature), row_count=dataset.row_count)


def classify_effect(effect: Optional[float], threshold: float) -> str:
    """Underperforming at effect >= threshold, overperforming at <= -threshold."""
    if effect is None:
        return NEUTRAL
    if effect >= threshold:
        return UNDERPERFORMING
    if effect <= -threshold:
        return OVERPERFORMING
    return NEUTRAL


def effect_size(
    slice_losses: Sequence[float], complement_losses: Sequence[float]
) -> float:
    """Standardized mean difference of per-row losses, slice vs complement:
    (mean_s - mean_c) / sqrt((var_s + var_c) / 2) with unbiased variances.

    Two constant groups compare exactly: 0 when the constants agree, signed
    infinity when they differ.
    """
    s = np.asarray(slice_losses, dtype=np.float64)
    c = np.asarray(complement_losses, dtype=np.float64)
    if s.size < 2 or c.size < 2:
        raise UndefinedEffectError(
            f"effect size needs >= 2 rows on both sides, got {s.size} and {c.size}"
        )
    s_min, s_max = float(s.min()), float(s.max())
    c_min, c_max = float(c.min()), float(c.max())
    mean_s, mean_c = float(s.mean()), float(c.mean())
    if s_min == s_max and c_min == c_max:
        if s_min == c_min:
            return 0.0
        return math.copysign(math.inf, s_min - c_min)
    var_s = float(np.var(s, ddof=1))
    var_c = float(np.var(c, ddof=1))
    pooled = math.sqrt((var_s + var_c) / 2.0)
    if pooled == 0.0:
        if mean_s == mean_c:
            return 0.0
        return math.copysign(math.inf, mean_s - mean_c)
    return (mean_s - mean_c) / pooled


def overall_metrics(preds: PredictionSet) -> MetricBundle:
    """MetricBundle over all rows; callers cache it once per analysis."""
    return metric_bundle(preds.y_true, preds.p_pos, preds.y_pred)


@dataclass(frozen=True)
class _LossContext:
    """Whole-dataset loss structure shared by every per-cell computation."""

    n: int
    loss_sum: float
    loss_sumsq: float
    gmin: float
    gmax: float
    two_valued: bool  # losses take exactly the two values {gmin, gmax}
    gmin_count: int


def _make_loss_context(loss: np.ndarray) -> _LossContext:
    gmin = float(loss.min())
    gmax = float(loss.max())
    two_valued = gmin < gmax and bool(np.all((loss == gmin) | (loss == gmax)))
    return _LossContext(
        n=int(loss.size),
        loss_sum=float(loss.sum()),
        loss_sumsq=float(np.dot(loss, loss)),
        gmin=gmin,
        gmax=gmax,
        two_valued=two_valued,
        gmin_count=int(np.count_nonzero(loss == gmin)) if two_valued else 0,
    )


def _sample_var(n: int, total: float, total_sq: float) -> float:
    # Clamp tiny negative values from floating-point cancellation.
    return max(0.0, (total_sq - total * total / n) / (n - 1))


def _cell_effect(
    ctx: _LossContext,
    n_s: int,
    sum_s: float,
    sumsq_s: float,
    min_s: float,
    max_s: float,
    gmin_in_cell: int,
) -> Optional[float]:
    """Effect size of one cell against its complement, from group moments.

    Mirrors effect_size(): constant-vs-constant cases are decided exactly
    (the two-valued loss structure makes constant complements detectable
    without scanning them).
    """
    n_c = ctx.n - n_s
    if n_s < 2 or n_c < 2:
        return None
    if ctx.gmin == ctx.gmax:
        return 0.0  # every loss identical: all groups constant and equal
    slice_const = min_s == max_s
    if slice_const and ctx.two_valued:
        gmin_outside = ctx.gmin_count - gmin_in_cell
        comp_const: Optional[float] = None
        if gmin_outside == 0:
            comp_const = ctx.gmax
        elif gmin_outside == n_c:
            comp_const = ctx.gmin
        if comp_const is not None:
            if min_s == comp_const:
                return 0.0
            return math.copysign(math.inf, min_s - comp_const)
    sum_c = ctx.loss_sum - sum_s
    sumsq_c = ctx.loss_sumsq - sumsq_s
    mean_s = sum_s / n_s
    mean_c = sum_c / n_c
    var_s = 0.0 if slice_const else _sample_var(n_s, sum_s, sumsq_s)
    var_c = _sample_var(n_c, sum_c, sumsq_c)
    pooled = math.sqrt((var_s + var_c) / 2.0)
    if pooled == 0.0:
        if mean_s == mean_c:
            return 0.0
        return math.copysign(math.inf, mean_s - mean_c)
    return (mean_s - mean_c) / pooled


@dataclass
class _CellSums:
    """Grouped per-cell sums for one feature or feature pair."""

    sizes: np.ndarray
    loss: np.ndarray
    loss_sq: np.ndarray
    correct: np.ndarray
    tp: np.ndarray
    fp: np.ndarray
    fn: np.ndarray
    loss_min: np.ndarray
    loss_max: np.ndarray
    gmin_count: np.ndarray


def _group_cells(
    codes: np.ndarray, n_cells: int, weights: dict[str, np.ndarray], ctx: _LossContext
) -> _CellSums:
    def agg(w: np.ndarray) -> np.ndarray:
        return np.bincount(codes, weights=w, minlength=n_cells)

    loss = weights["loss"]
    loss_min = np.full(n_cells, np.inf)
    loss_max = np.full(n_cells, -np.inf)
    np.minimum.at(loss_min, codes, loss)
    np.maximum.at(loss_max, codes, loss)
    if ctx.two_valued:
        gmin_count = agg((loss == ctx.gmin).astype(np.float64))
    else:
        gmin_count = np.zeros(n_cells)
    return _CellSums(
        sizes=np.bincount(codes, minlength=n_cells),
        loss=agg(loss),
        loss_sq=agg(weights["loss_sq"]),
        correct=agg(weights["correct"]),
        tp=agg(weights["tp"]),
        fp=agg(weights["fp"]),
        fn=agg(weights["fn"]),
        loss_min=loss_min,
        loss_max=loss_max,
        gmin_count=gmin_count,
    )


def _make_stats(
    dataset: Dataset,
    predicates: tuple[Predicate, ...],
    membership: int,
    cell: int,
    sums: _CellSums,
    ctx: _LossContext,
    overall_log_loss: float,
    effect_threshold: float,
) -> SliceStats:
    n_s = int(sums.sizes[cell])
    tp = int(sums.tp[cell])
    fp = int(sums.fp[cell])
    fn = int(sums.fn[cell])
    cm = classification_from_confusion(tp, fp, fn, n_s - tp - fp - fn)
    slice_log_loss = float(sums.loss[cell]) / n_s
    bundle = MetricBundle(
        log_loss=slice_log_loss,
        accuracy=float(sums.correct[cell]) / n_s,
        balanced_accuracy=cm.balanced_accuracy,
        precision=cm.precision,
        recall=cm.recall,
        size=n_s,
        degenerate=cm.degenerate,
    )
    effect = _cell_effect(
        ctx,
        n_s,
        float(sums.loss[cell]),
        float(sums.loss_sq[cell]),
        float(sums.loss_min[cell]),
        float(sums.loss_max[cell]),
        int(sums.gmin_count[cell]),
    )
    resolved = sorted(
        (
            (
                dataset.schemas[p.feature_index].name,
                dataset.schemas[p.feature_index].value_labels[p.value_index],
            ),
            p,
        )
        for p in predicates
    )
    terms = tuple(t for t, _ in resolved)
    slice_id = "|".join(f"{name}:{label}" for name, label in terms)
    sdef = SliceDef(
        predicates=tuple(p for _, p in resolved), terms=terms, id=slice_id
    )
    return SliceStats(
        definition=sdef,
        membership=membership,
        size=n_s,
        metrics=bundle,
        effect_size=effect,
        log_loss_pct_diff=pct_diff(slice_log_loss, overall_log_loss),
        classification=classify_effect(effect, effect_threshold),
    )


def enumerate_slices(
    dataset: Dataset,
    preds: PredictionSet,
    min_size: int = 1,
    effect_threshold: float = DEFAULT_EFFECT_THRESHOLD,
    max_degree: int = 2,
) -> list[SliceStats]:
    """All slices of degree <= max_degree with size >= min_size, each with
    full metrics, effect size, and under/over/neutral classification.

    Deterministically ordered by descending |effect size| (undefined last),
    ties broken by ascending slice id.
    """
    if dataset.row_count == 0:
        raise EngineError("cannot enumerate slices of an empty dataset")
    if preds.row_count != dataset.row_count:
        raise EngineError(
            f"predictions have {preds.row_count} rows, dataset has {dataset.row_count}"
        )
    if min_size < 1:
        raise EngineError(f"min_size must be >= 1, got {min_size}")
    if effect_threshold <= 0:
        raise EngineError(f"effect_threshold must be > 0, got {effect_threshold}")
    if max_degree not in (1, 2):
        raise EngineError(f"max_degree must be 1 or 2, got {max_degree}")

    index = build_index(dataset)
    loss = per_row_log_loss(preds.y_true, preds.p_pos)
    ctx = _make_loss_context(loss)
    y = preds.y_true.astype(np.int8)
    yp = preds.y_pred.astype(np.int8)
    weights = {
        "loss": loss,
        "loss_sq": loss * loss,
        "correct": (y == yp).astype(np.float64),
        "tp": ((y == 1) & (yp == 1)).astype(np.float64),
        "fp": ((y == 0) & (yp == 1)).astype(np.float64),
        "fn": ((y == 1) & (yp == 0)).astype(np.float64),
    }
    # Same arithmetic as metrics.log_loss so pct_diffs line up exactly.
    overall_log_loss = float(loss.mean())

    results: list[SliceStats] = []
    enc = dataset.encoded
    n_features = len(dataset.schemas)

    for f, schema in enumerate(dataset.schemas):
        column = enc[:, f]
        valid = column != MISSING
        codes = column[valid].astype(np.int64)
        sums = _group_cells(
            codes, schema.cardinality, {k: w[valid] for k, w in weights.items()}, ctx
        )
        for v in range(schema.cardinality):
            if sums.sizes[v] < min_size:
                continue
            results.append(
                _make_stats(
                    dataset,
                    (Predicate(f, v),),
                    index.bitset(f, v),
                    v,
                    sums,
                    ctx,
                    overall_log_loss,
                    effect_threshold,
                )
            )

    if max_degree >= 2:
        for f1 in range(n_features):
            card1 = dataset.schemas[f1].cardinality
            col1 = enc[:, f1]
            for f2 in range(f1 + 1, n_features):
                card2 = dataset.schemas[f2].cardinality
                col2 = enc[:, f2]
                valid = (col1 != MISSING) & (col2 != MISSING)
                codes = col1[valid].astype(np.int64) * card2 + col2[valid]
                sums = _group_cells(
                    codes,
                    card1 * card2,
                    {k: w[valid] for k, w in weights.items()},
                    ctx,
                )
                for v1 in range(card1):
                    base = v1 * card2
                    for v2 in range(card2):
                        if sums.sizes[base + v2] < min_size:
                            continue
                        membership = index.bitset(f1, v1) & index.bitset(f2, v2)
                        results.append(
                            _make_stats(
                                dataset,
                                (Predicate(f1, v1), Predicate(f2, v2)),
                                membership,
                                base + v2,
                                sums,
                                ctx,
                                overall_log_loss,
                                effect_threshold,
                            )
                        )

    def sort_key(s: SliceStats) -> tuple:
        if s.effect_size is None:
            return (1, 0.0, s.definition.id)
        return (0, -abs(s.effect_size), s.definition.id)

    results.sort(key=sort_key)
    return results
