"""One-shot analysis runner and the read-only HTTP service around it.

The analysis is computed once at startup and held immutable; every request
is answered from that snapshot, so concurrent handling needs no locks and
responses are byte-identical to in-process query calls.
"""

from __future__ import annotations

import os
import socket
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.responses import HTMLResponse, Response
from fastapi.staticfiles import StaticFiles

from .engine import (
    DEFAULT_EFFECT_THRESHOLD,
    SliceStats,
    enumerate_slices,
    overall_metrics,
)
from .graph import build_graph
from .ingest import Dataset, PredictionSet, load_dataset, load_predictions
from .metrics import MetricBundle
from .query import (
    QueryValidationError,
    SliceQuery,
    apply_query,
    canonical_json,
    make_summary,
    query_stats,
    serialize_graph,
    serialize_summaries,
    serialize_summary,
    serialize_overall,
)


@dataclass
class AnalysisConfig:
    data_path: str
    predictions_path: str
    label_column: str
    bins: int = 4
    max_degree: int = 2
    min_size: int = 30
    effect_threshold: float = DEFAULT_EFFECT_THRESHOLD
    port: int = 8080
    schema_path: Optional[str] = None
    ui_dir: Optional[str] = None

    def validate(self) -> None:
        if self.bins < 2:
            raise ValueError(f"bins must be >= 2, got {self.bins}")
        if self.max_degree not in (1, 2):
            raise ValueError(f"max-degree must be 1 or 2, got {self.max_degree}")
        if self.min_size < 1:
            raise ValueError(f"min-size must be >= 1, got {self.min_size}")
        if self.effect_threshold <= 0:
            raise ValueError(
                f"effect-threshold must be > 0, got {self.effect_threshold}"
            )
        if not (1 <= self.port <= 65535):
            raise ValueError(f"port must be in 1..65535, got {self.port}")

    def provenance(self) -> dict:
        """Parameter echo embedded in analysis output."""
        return {
            "data_path": str(self.data_path),
            "predictions_path": str(self.predictions_path),
            "label_column": self.label_column,
            "bins": self.bins,
            "max_degree": self.max_degree,
            "min_size": self.min_size,
            "effect_threshold": self.effect_threshold,
        }


@dataclass(frozen=True)
class AnalysisSnapshot:
    """Immutable result of one ingest + enumerate run."""

    dataset: Dataset
    predictions: PredictionSet
    slices: tuple[SliceStats, ...]
    overall: MetricBundle
    config: AnalysisConfig

    @property
    def feature_names(self) -> tuple[str, ...]:
        return self.dataset.feature_names

    def slice_by_id(self, slice_id: str) -> Optional[SliceStats]:
        return self._by_id.get(slice_id)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "_by_id", {s.definition.id: s for s in self.slices}
        )


def run_analysis(config: AnalysisConfig) -> AnalysisSnapshot:
    config.validate()
    dataset = load_dataset(
        config.data_path,
        config.label_column,
        bins=config.bins,
        schema_path=config.schema_path,
    )
    preds = load_predictions(config.predictions_path, dataset.row_count)
    slices = enumerate_slices(
        dataset,
        preds,
        min_size=config.min_size,
        effect_threshold=config.effect_threshold,
        max_degree=config.max_degree,
    )
    return AnalysisSnapshot(
        dataset=dataset,
        predictions=preds,
        slices=tuple(slices),
        overall=overall_metrics(preds),
        config=config,
    )


_SLICE_PARAMS = frozenset({"sort_by", "top_k", "min_size", "features", "class"})
_GRAPH_PARAMS = _SLICE_PARAMS | {"min_overlap"}


def parse_query_params(params: dict, allowed: frozenset[str]) -> SliceQuery:
    """Translate raw query-string values into a SliceQuery, rejecting
    unknown names and unparseable values."""
    unknown = sorted(set(params) - allowed)
    if unknown:
        raise QueryValidationError(
            f"unknown query parameter(s) {', '.join(unknown)}; valid: "
            + ", ".join(sorted(allowed))
        )

    def as_int(name: str, default: int) -> int:
        raw = params.get(name)
        if raw is None:
            return default
        try:
            return int(raw)
        except ValueError:
            raise QueryValidationError(
                f"{name} must be an integer, got {raw!r}"
            ) from None

    top_k_raw = params.get("top_k", "all")
    if str(top_k_raw).lower() == "all":
        top_k = None
    else:
        try:
            top_k = int(top_k_raw)
        except ValueError:
            raise QueryValidationError(
                f"top_k must be an integer or 'all', got {top_k_raw!r}"
            ) from None

    features_raw = params.get("features", "")
    features = frozenset(f for f in (p.strip() for p in features_raw.split(",")) if f)

    return SliceQuery(
        sort_by=params.get("sort_by", "effect_size"),
        top_k=top_k,
        min_size=as_int("min_size", 1),
        features_include=features,
        performance_class=params.get("class", "underperforming"),
        min_overlap=as_int("min_overlap", 1),
    )


_PLACEHOLDER_PAGE = """<!doctype html>
<html><head><meta charset="utf-8"><title>sliceaudit</title></head>
<body><h1>sliceaudit</h1>
<p>The analysis API is up. No UI bundle was found; build the frontend
(<code>cd frontend && npm install && npm run build</code>) and restart with
<code>--ui-dir frontend/dist</code>, or query the API directly:</p>
<ul>
<li><a href="/api/schema">/api/schema</a></li>
<li><a href="/api/overall">/api/overall</a></li>
<li><a href="/api/slices?top_k=10">/api/slices?top_k=10</a></li>
<li><a href="/api/graph?top_k=10">/api/graph?top_k=10</a></li>
</ul></body></html>
"""


def create_app(snapshot: AnalysisSnapshot, ui_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="sliceaudit", docs_url=None, redoc_url=None)

    def json_response(payload: str, status_code: int = 200) -> Response:
        return Response(
            content=payload, media_type="application/json", status_code=status_code
        )

    def error_response(status_code: int, message: str) -> Response:
        return json_response(canonical_json({"detail": message}), status_code)

    @app.exception_handler(QueryValidationError)
    async def _on_validation_error(_request: Request, exc: QueryValidationError):
        return error_response(400, str(exc))

    @app.get("/api/schema")
    def get_schema() -> Response:
        features = [
            {"name": s.name, "kind": s.kind, "values": list(s.value_labels)}
            for s in snapshot.dataset.schemas
        ]
        return json_response(
            canonical_json(
                {
                    "features": features,
                    "label_column": snapshot.config.label_column,
                    "row_count": snapshot.dataset.row_count,
                }
            )
        )

    @app.get("/api/overall")
    def get_overall() -> Response:
        return json_response(serialize_overall(snapshot.overall))

    @app.get("/api/slices")
    def get_slices(request: Request) -> Response:
        q = parse_query_params(dict(request.query_params), _SLICE_PARAMS)
        summaries = apply_query(snapshot.slices, q, snapshot.feature_names)
        return json_response(serialize_summaries(summaries))

    @app.get("/api/graph")
    def get_graph(request: Request) -> Response:
        q = parse_query_params(dict(request.query_params), _GRAPH_PARAMS)
        stats = query_stats(snapshot.slices, q, snapshot.feature_names)
        return json_response(serialize_graph(build_graph(stats, q.min_overlap)))

    @app.get("/api/slice/{slice_id:path}")
    def get_slice(slice_id: str) -> Response:
        stats = snapshot.slice_by_id(slice_id)
        if stats is None:
            return error_response(404, f"unknown slice id: {slice_id}")
        return json_response(serialize_summary(make_summary(stats)))

    resolved_ui = Path(ui_dir) if ui_dir else None
    if resolved_ui is not None and resolved_ui.is_dir():
        app.mount("/", StaticFiles(directory=str(resolved_ui), html=True), name="ui")
    else:

        @app.get("/", include_in_schema=False)
        def index() -> HTMLResponse:
            return HTMLResponse(_PLACEHOLDER_PAGE)

    return app


def _check_port_free(host: str, port: int) -> None:
    with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as probe:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        try:
            probe.bind((host, port))
        except OSError as exc:
            raise OSError(f"cannot listen on {host}:{port}: {exc}") from exc


def serve(config: AnalysisConfig, host: str = "127.0.0.1") -> None:
    """Run the analysis once, then serve it until interrupted."""
    import uvicorn

    port = int(os.environ.get("PORT", config.port))
    snapshot = run_analysis(config)
    app = create_app(snapshot, ui_dir=config.ui_dir)
    _check_port_free(host, port)
    uvicorn.run(app, host=host, port=port, log_level="info")
