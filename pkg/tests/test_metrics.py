import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sliceaudit.metrics import (
    UndefinedMetricError,
    classification_metrics,
    log_loss,
    metric_bundle,
    pct_diff,
)

from oracle import brute_log_loss


class TestLogLoss:
    def test_half_probability_is_ln2(self):
        assert log_loss([1], [0.5]) == pytest.approx(math.log(2), abs=1e-12)

    def test_certain_correct_prediction_clamps(self):
        # p = 1.0 is clamped to 1 - 1e-15 rather than producing -log(0).
        v = log_loss([1], [1.0])
        assert v == -math.log(1.0 - 1e-15)
        assert 0 <= v < 1e-12

    def test_certain_wrong_prediction_is_finite(self):
        v = log_loss([0], [1.0])
        assert math.isfinite(v)
        assert v == pytest.approx(-math.log(1e-15), rel=1e-3)

    def test_two_row_example(self):
        # Independently: (-ln 0.9 - ln 0.8) / 2
        assert log_loss([1, 0], [0.9, 0.2]) == pytest.approx(0.164252033486018, abs=1e-12)

    def test_empty_input_rejected(self):
        with pytest.raises(UndefinedMetricError):
            log_loss([], [])

    def test_length_mismatch_rejected(self):
        with pytest.raises(UndefinedMetricError):
            log_loss([1, 0], [0.5])

    @given(
        st.lists(
            st.tuples(st.integers(0, 1), st.floats(0.0, 1.0)), min_size=1, max_size=50
        )
    )
    def test_matches_brute_force_and_permutation_invariant(self, pairs):
        y = [a for a, _ in pairs]
        p = [b for _, b in pairs]
        direct = log_loss(y, p)
        assert direct == pytest.approx(brute_log_loss(y, p), rel=1e-12)
        assert log_loss(y[::-1], p[::-1]) == pytest.approx(direct, rel=1e-12)

    @given(st.lists(st.integers(0, 1), min_size=1, max_size=50))
    def test_constant_half_predictor_gives_ln2(self, labels):
        assert log_loss(labels, [0.5] * len(labels)) == pytest.approx(math.log(2))


class TestClassificationMetrics:
    def test_perfect_predictions(self):
        m = classification_metrics([1, 0, 1, 0], [1, 0, 1, 0])
        assert (m.accuracy, m.balanced_accuracy, m.precision, m.recall) == (1, 1, 1, 1)
        assert not m.degenerate

    def test_hand_counted_confusion(self):
        m = classification_metrics([1, 1, 0, 0], [1, 0, 0, 0])
        assert m.accuracy == 0.75
        assert m.balanced_accuracy == 0.75  # (0.5 + 1.0) / 2
        assert m.precision == 1.0
        assert m.recall == 0.5

    def test_no_positive_predictions_precision_undefined(self):
        m = classification_metrics([1, 1], [0, 0])
        assert m.precision is None
        assert m.recall == 0.0
        assert m.degenerate

    def test_one_class_balanced_accuracy_falls_back_to_recall(self):
        m = classification_metrics([1, 1, 1], [1, 0, 1])
        assert m.balanced_accuracy == pytest.approx(2 / 3)
        assert m.degenerate
        m = classification_metrics([0, 0], [0, 1])
        assert m.balanced_accuracy == 0.5  # negative-class recall
        assert m.degenerate

    def test_empty_input_rejected(self):
        with pytest.raises(UndefinedMetricError):
            classification_metrics([], [])

    @given(st.lists(st.tuples(st.integers(0, 1), st.integers(0, 1)), min_size=2, max_size=60))
    def test_label_swap_flips_balanced_accuracy(self, pairs):
        y = [a for a, _ in pairs]
        yp = [b for _, b in pairs]
        if len(set(y)) < 2:
            return  # property stated for two-class data only
        original = classification_metrics(y, yp).balanced_accuracy
        swapped = classification_metrics(y, [1 - v for v in yp]).balanced_accuracy
        assert swapped == pytest.approx(1.0 - original, abs=1e-12)


class TestPctDiff:
    def test_equal_values(self):
        assert pct_diff(0.5, 0.5) == 0.0

    def test_twenty_percent_up(self):
        assert pct_diff(0.6, 0.5) == pytest.approx(20.0)

    def test_twenty_percent_down(self):
        assert pct_diff(0.4, 0.5) == pytest.approx(-20.0)

    def test_zero_overall_rejected(self):
        with pytest.raises(UndefinedMetricError):
            pct_diff(0.1, 0.0)

    @given(st.floats(min_value=1e-9, max_value=1e9))
    def test_self_comparison_is_zero(self, x):
        assert pct_diff(x, x) == 0.0


class TestMetricBundle:
    def test_bundle_fields(self):
        b = metric_bundle([1, 0], [0.9, 0.2], [1, 0])
        assert b.size == 2
        assert b.accuracy == 1.0
        assert b.log_loss == pytest.approx(0.164252, abs=1e-6)
        assert not b.degenerate

    def test_bundle_invariants_on_random_data(self):
        rng = np.random.default_rng(7)
        y = rng.integers(0, 2, 200)
        p = rng.uniform(0.01, 0.99, 200)
        yp = (p >= 0.5).astype(int)
        b = metric_bundle(y, p, yp)
        assert b.log_loss >= 0
        for v in (b.accuracy, b.balanced_accuracy, b.precision, b.recall):
            assert v is None or 0 <= v <= 1
