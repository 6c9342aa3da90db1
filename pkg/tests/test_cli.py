import json
import random

import pytest

from sliceaudit.cli import build_parser, main

from conftest import make_random_tables, write_csv


@pytest.fixture()
def small_inputs(tmp_path):
    rng = random.Random(77)
    header, rows, pred_header, pred_rows = make_random_tables(rng, 300, 4)
    data = write_csv(tmp_path / "data.csv", header, rows)
    preds = write_csv(tmp_path / "preds.csv", pred_header, pred_rows)
    return data, preds


def run_analyze(tmp_path, data, preds, *extra):
    out = tmp_path / "analysis.json"
    code = main(
        [
            "analyze",
            "--data", str(data),
            "--predictions", str(preds),
            "--label", "label",
            "--min-size", "2",
            "--out", str(out),
            *extra,
        ]
    )
    return code, out


class TestAnalyze:
    def test_happy_path_writes_valid_json(self, tmp_path, small_inputs, capsys):
        data, preds = small_inputs
        code, out = run_analyze(tmp_path, data, preds)
        assert code == 0
        doc = json.loads(out.read_text())
        assert set(doc) == {"overall", "slices", "graph", "config"}
        assert doc["config"]["min_size"] == 2
        assert doc["config"]["bins"] == 4
        assert len(doc["slices"]) > 0
        assert len(doc["graph"]["nodes"]) <= 100
        summary = capsys.readouterr().out
        assert "underperforming" in summary and "overperforming" in summary

    def test_missing_predictions_file(self, tmp_path, small_inputs, capsys):
        data, _ = small_inputs
        missing = tmp_path / "nowhere.csv"
        code, _ = run_analyze(tmp_path, data, missing)
        assert code == 1
        err = capsys.readouterr().err
        assert "nowhere.csv" in err

    def test_min_size_above_row_count_gives_empty_slices(self, tmp_path, small_inputs):
        data, preds = small_inputs
        out = tmp_path / "analysis.json"
        code = main(
            [
                "analyze",
                "--data", str(data),
                "--predictions", str(preds),
                "--label", "label",
                "--min-size", "999999",
                "--out", str(out),
            ]
        )
        assert code == 0
        assert json.loads(out.read_text())["slices"] == []

    def test_invalid_config_rejected_before_ingestion(self, tmp_path, small_inputs, capsys):
        data, preds = small_inputs
        code, _ = run_analyze(tmp_path, data, preds, "--bins", "1")
        assert code == 1
        assert "bins" in capsys.readouterr().err

    def test_graph_nodes_are_top_slices_by_effect(self, tmp_path, small_inputs):
        data, preds = small_inputs
        code, out = run_analyze(tmp_path, data, preds)
        assert code == 0
        doc = json.loads(out.read_text())
        head_ids = [s["id"] for s in doc["slices"][:100]]
        assert doc["graph"]["nodes"] == head_ids


class TestParser:
    def test_defaults_follow_spec(self):
        parser = build_parser()
        args = parser.parse_args(
            ["analyze", "--data", "d", "--predictions", "p", "--label", "y", "--out", "o"]
        )
        assert args.bins == 4
        assert args.max_degree == 2
        assert args.min_size == 30
        assert args.effect_threshold == 0.4

    def test_help_mentions_defaults(self, capsys):
        parser = build_parser()
        with pytest.raises(SystemExit):
            parser.parse_args(["analyze", "--help"])
        text = capsys.readouterr().out
        assert "default: 30" in text
        assert "default: 0.4" in text

    def test_serve_port_default(self):
        parser = build_parser()
        args = parser.parse_args(
            ["serve", "--data", "d", "--predictions", "p", "--label", "y"]
        )
        assert args.port == 8080
        assert args.host == "127.0.0.1"


class TestServeStartup:
    def test_port_env_override(self, monkeypatch, small_inputs):
        import sliceaudit.server as server_mod

        captured = {}

        def fake_run(app, host, port, log_level):
            captured["port"] = port

        monkeypatch.setattr("uvicorn.run", fake_run)
        monkeypatch.setenv("PORT", "9191")
        data, preds = small_inputs
        code = main(
            [
                "serve",
                "--data", str(data),
                "--predictions", str(preds),
                "--label", "label",
                "--min-size", "2",
                "--port", "8080",
            ]
        )
        assert code == 0
        assert captured["port"] == 9191

    def test_occupied_port_fails_with_message(self, monkeypatch, small_inputs, capsys):
        import socket

        blocker = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        blocker.bind(("127.0.0.1", 0))
        blocker.listen(1)
        port = blocker.getsockname()[1]
        try:
            data, preds = small_inputs
            code = main(
                [
                    "serve",
                    "--data", str(data),
                    "--predictions", str(preds),
                    "--label", "label",
                    "--min-size", "2",
                    "--port", str(port),
                ]
            )
            assert code == 1
            assert str(port) in capsys.readouterr().err
        finally:
            blocker.close()
