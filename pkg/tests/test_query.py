import json
import math

import pytest

from sliceaudit.engine import enumerate_slices, overall_metrics
from sliceaudit.graph import build_graph
from sliceaudit.query import (
    QueryValidationError,
    SliceQuery,
    apply_query,
    make_summary,
    parse_slice_id,
    query_stats,
    serialize_analysis,
    serialize_summaries,
    summary_to_dict,
)

from conftest import load_random_pair


@pytest.fixture(scope="module")
def analysis(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("query")
    ds, ps = load_random_pair(tmp, seed=101, n_rows=400, n_features=5)
    slices = enumerate_slices(ds, ps, min_size=2, effect_threshold=0.15)
    return ds, ps, slices


class TestApplyQuery:
    def test_identity_filter_returns_whole_class_sorted(self, analysis):
        ds, _, slices = analysis
        q = SliceQuery(sort_by="effect_size", top_k=None, min_size=1)
        out = apply_query(slices, q, ds.feature_names)
        expected = sum(1 for s in slices if s.classification == "underperforming")
        assert len(out) == expected
        values = [s.effect_size for s in out if s.effect_size is not None]
        assert values == sorted(values, reverse=True)

    def test_top_k_zero_rejected(self, analysis):
        ds, _, slices = analysis
        with pytest.raises(QueryValidationError):
            apply_query(slices, SliceQuery(top_k=0), ds.feature_names)

    def test_manual_filter_and_sort(self, analysis):
        ds, _, slices = analysis
        q = SliceQuery(sort_by="size", top_k=1, min_size=30)
        out = apply_query(slices, q, ds.feature_names)
        eligible = [
            s.size
            for s in slices
            if s.classification == "underperforming" and s.size >= 30
        ]
        if eligible:
            assert out[0].size == max(eligible)
        else:
            assert out == []

    def test_prefix_property(self, analysis):
        ds, _, slices = analysis
        for dim in ("effect_size", "log_loss", "size", "balanced_accuracy"):
            previous = []
            for k in range(1, 12):
                q = SliceQuery(sort_by=dim, top_k=k)
                current = [s.id for s in apply_query(slices, q, ds.feature_names)]
                assert current[: len(previous)] == previous
                previous = current

    def test_filters_commute(self, analysis):
        ds, _, slices = analysis
        feature = ds.feature_names[0]
        by_size_first = [
            s
            for s in slices
            if s.size >= 25
            and {feature}.intersection(n for n, _ in s.definition.terms)
        ]
        by_feature_first = [
            s
            for s in slices
            if {feature}.intersection(n for n, _ in s.definition.terms)
            and s.size >= 25
        ]
        assert by_size_first == by_feature_first
        q = SliceQuery(min_size=25, features_include=frozenset({feature}))
        out = apply_query(slices, q, ds.feature_names)
        assert all(
            any(n == feature for n, _ in s.predicates) and s.size >= 25 for s in out
        )

    def test_under_and_over_disjoint(self, analysis):
        ds, _, slices = analysis
        under = {
            s.id
            for s in apply_query(
                slices, SliceQuery(performance_class="underperforming"), ds.feature_names
            )
        }
        over = {
            s.id
            for s in apply_query(
                slices, SliceQuery(performance_class="overperforming"), ds.feature_names
            )
        }
        assert under.isdisjoint(over)

    def test_repeat_queries_identical(self, analysis):
        ds, _, slices = analysis
        q = SliceQuery(sort_by="log_loss", top_k=7)
        first = apply_query(slices, q, ds.feature_names)
        second = apply_query(slices, q, ds.feature_names)
        assert first == second

    def test_accuracy_family_direction_flips_with_view(self, analysis):
        ds, _, slices = analysis
        under = apply_query(
            slices,
            SliceQuery(sort_by="accuracy", performance_class="underperforming"),
            ds.feature_names,
        )
        vals = [s.metrics.accuracy for s in under]
        assert vals == sorted(vals)  # worst (lowest accuracy) first
        over = apply_query(
            slices,
            SliceQuery(sort_by="accuracy", performance_class="overperforming"),
            ds.feature_names,
        )
        vals = [s.metrics.accuracy for s in over]
        assert vals == sorted(vals, reverse=True)

    def test_undefined_sort_values_go_last(self, analysis):
        ds, _, slices = analysis
        out = apply_query(
            slices, SliceQuery(sort_by="precision"), ds.feature_names
        )
        defined_done = False
        for s in out:
            if s.metrics.precision is None:
                defined_done = True
            else:
                assert not defined_done, "defined value after an undefined one"

    def test_unknown_sort_dimension_lists_options(self, analysis):
        ds, _, slices = analysis
        with pytest.raises(QueryValidationError, match="effect_size"):
            apply_query(slices, SliceQuery(sort_by="wat"), ds.feature_names)

    def test_unknown_feature_lists_options(self, analysis):
        ds, _, slices = analysis
        with pytest.raises(QueryValidationError, match=ds.feature_names[0]):
            apply_query(
                slices,
                SliceQuery(features_include=frozenset({"no_such_feature"})),
                ds.feature_names,
            )

    def test_unknown_performance_class_rejected(self, analysis):
        ds, _, slices = analysis
        with pytest.raises(QueryValidationError, match="underperforming"):
            apply_query(slices, SliceQuery(performance_class="neutral"), ds.feature_names)


class TestSummaries:
    def test_id_round_trips_to_predicates(self, analysis):
        _, _, slices = analysis
        for s in slices[:50]:
            summary = make_summary(s)
            assert parse_slice_id(summary.id) == summary.predicates

    def test_undefined_metrics_serialize_as_null_with_flag(self, tmp_path):
        from conftest import write_csv
        from sliceaudit.ingest import load_dataset, load_predictions

        # Slice g:a gets no positive predictions: precision undefined.
        data = write_csv(
            tmp_path / "d.csv",
            ["g", "y"],
            [["a", "1"], ["a", "1"], ["b", "0"], ["b", "1"]],
        )
        preds = write_csv(
            tmp_path / "p.csv",
            ["y_true", "p_pos"],
            [["1", "0.3"], ["1", "0.4"], ["0", "0.2"], ["1", "0.9"]],
        )
        ds = load_dataset(data, "y")
        ps = load_predictions(preds, 4)
        slices = enumerate_slices(ds, ps, min_size=1)
        target = next(s for s in slices if s.definition.id == "g:a")
        assert target.metrics.precision is None
        d = summary_to_dict(make_summary(target))
        assert d["metrics"]["precision"] is None
        assert d["degenerate"] is True

    def test_infinite_effect_encodes_as_string(self):
        from sliceaudit.engine import SliceDef, SliceStats, Predicate
        from sliceaudit.metrics import MetricBundle

        stats = SliceStats(
            definition=SliceDef(
                predicates=(Predicate(0, 0),), terms=(("f", "v"),), id="f:v"
            ),
            membership=0b11,
            size=2,
            metrics=MetricBundle(0.1, 1.0, 1.0, 1.0, 1.0, 2, False),
            effect_size=math.inf,
            log_loss_pct_diff=5.0,
            classification="underperforming",
        )
        d = summary_to_dict(make_summary(stats))
        assert d["effect_size"] == "inf"
        assert d["degenerate"] is True


class TestSerializeAnalysis:
    def test_empty_slice_list(self, analysis):
        _, ps, _ = analysis
        doc = serialize_analysis([], overall_metrics(ps))
        parsed = json.loads(doc)
        assert parsed["slices"] == []
        assert set(parsed) == {"overall", "slices"}

    def test_round_trip_is_byte_identical(self, analysis):
        ds, ps, slices = analysis
        q = SliceQuery(top_k=25)
        summaries = apply_query(slices, q, ds.feature_names)
        graph = build_graph(query_stats(slices, q, ds.feature_names), 1)
        doc = serialize_analysis(summaries, overall_metrics(ps), graph=graph)
        reserialized = json.dumps(
            json.loads(doc), ensure_ascii=False, separators=(",", ":")
        )
        assert reserialized == doc

    def test_single_isolated_node_graph(self, analysis):
        ds, ps, slices = analysis
        q = SliceQuery(top_k=1)
        stats = query_stats(slices, q, ds.feature_names)
        graph = build_graph(stats, 1)
        doc = json.loads(
            serialize_analysis(
                apply_query(slices, q, ds.feature_names), overall_metrics(ps), graph=graph
            )
        )
        assert len(doc["graph"]["nodes"]) == 1
        assert doc["graph"]["edges"] == []

    def test_serialized_summaries_parse_with_expected_keys(self, analysis):
        ds, _, slices = analysis
        out = apply_query(slices, SliceQuery(top_k=3), ds.feature_names)
        parsed = json.loads(serialize_summaries(out))
        for item in parsed:
            assert list(item) == [
                "id",
                "predicates",
                "degree",
                "size",
                "metrics",
                "effect_size",
                "log_loss_pct_diff",
                "classification",
                "degenerate",
            ]
            assert list(item["metrics"]) == [
                "log_loss",
                "accuracy",
                "balanced_accuracy",
                "precision",
                "recall",
                "size",
            ]
