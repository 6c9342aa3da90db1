"""Command-line entry points: one-shot `analyze` and long-running `serve`."""

from __future__ import annotations

import argparse
import sys
from collections import Counter
from pathlib import Path
from typing import Optional, Sequence

from .engine import DEFAULT_EFFECT_THRESHOLD, EngineError
from .graph import build_graph
from .ingest import IngestError
from .query import QueryValidationError, make_summary, serialize_analysis
from .server import AnalysisConfig, run_analysis, serve

# Node budget for the overview graph written by `analyze`: pairwise overlap
# work is capped at this squared.
ANALYZE_GRAPH_TOP = 100


def _add_analysis_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--data", required=True, help="dataset CSV (header row required)")
    parser.add_argument(
        "--predictions",
        required=True,
        help="predictions CSV with columns y_true,p_pos[,y_pred]",
    )
    parser.add_argument("--label", required=True, help="label column to exclude from slicing")
    parser.add_argument("--bins", type=int, default=4, help="quantile bins for continuous features")
    parser.add_argument("--max-degree", type=int, default=2, choices=(1, 2), help="max predicates per slice")
    parser.add_argument("--min-size", type=int, default=30, help="smallest slice to keep")
    parser.add_argument(
        "--effect-threshold",
        type=float,
        default=DEFAULT_EFFECT_THRESHOLD,
        help="|effect size| at which a slice counts as under/overperforming",
    )
    parser.add_argument("--schema", default=None, help="optional JSON sidecar overriding column schemas")


def _config_from_args(args: argparse.Namespace) -> AnalysisConfig:
    return AnalysisConfig(
        data_path=args.data,
        predictions_path=args.predictions,
        label_column=args.label,
        bins=args.bins,
        max_degree=args.max_degree,
        min_size=args.min_size,
        effect_threshold=args.effect_threshold,
        port=getattr(args, "port", 8080),
        schema_path=args.schema,
        ui_dir=getattr(args, "ui_dir", None),
    )


def cmd_analyze(config: AnalysisConfig, out_path: str) -> int:
    snapshot = run_analysis(config)
    graph = build_graph(snapshot.slices[:ANALYZE_GRAPH_TOP], min_overlap=1)
    document = serialize_analysis(
        [make_summary(s) for s in snapshot.slices],
        snapshot.overall,
        graph=graph,
        config=config.provenance(),
    )
    Path(out_path).write_text(document + "\n", encoding="utf-8")
    counts = Counter(s.classification for s in snapshot.slices)
    print(
        f"{len(snapshot.slices)} slices: "
        f"{counts.get('underperforming', 0)} underperforming, "
        f"{counts.get('overperforming', 0)} overperforming, "
        f"{counts.get('neutral', 0)} neutral -> {out_path}"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sliceaudit",
        description="Find and explore under- and over-performing data slices "
        "of a binary classifier.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser(
        "analyze",
        help="run one analysis and write the full JSON document",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    _add_analysis_flags(p_analyze)
    p_analyze.add_argument("--out", required=True, help="output JSON path")

    p_serve = sub.add_parser(
        "serve",
        help="analyze once, then serve the query API and UI over HTTP",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    _add_analysis_flags(p_serve)
    p_serve.add_argument("--port", type=int, default=8080, help="listen port (PORT env overrides)")
    p_serve.add_argument("--host", default="127.0.0.1", help="listen address")
    p_serve.add_argument(
        "--ui-dir",
        dest="ui_dir",
        default=None,
        help="directory of built UI assets to serve at / (e.g. frontend/dist)",
    )
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _config_from_args(args)
        if args.command == "analyze":
            return cmd_analyze(config, args.out)
        serve(config, host=args.host)
        return 0
    except (IngestError, EngineError, QueryValidationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
