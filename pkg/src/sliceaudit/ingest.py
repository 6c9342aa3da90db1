"""CSV ingestion: schema inference, quantile binning, and row encoding.

Produces the compact encoded table the slice engine consumes. Feature
values are encoded as small integers per column (category ordinal or bin
ordinal); missing cells carry the MISSING sentinel and belong to no slice.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

# Encoded value for a missing cell. A missing value satisfies no predicate.
MISSING = -1

# Cell contents treated as missing after whitespace strip ("?" is the
# conventional unknown marker in census-style CSVs).
MISSING_TOKENS = frozenset({"", "?"})

CATEGORICAL = "categorical"
CONTINUOUS = "continuous"


class IngestError(ValueError):
    """Raised for unreadable, malformed, or inconsistent input files."""


@dataclass(frozen=True)
class ColumnSchema:
    """Schema of one feature column.

    Categorical columns carry ``categories`` (sorted distinct values);
    continuous columns carry strictly increasing ``bin_edges`` plus one
    display label per bin.
    """

    name: str
    kind: str  # CATEGORICAL or CONTINUOUS
    categories: tuple[str, ...] = ()
    bin_edges: tuple[float, ...] = ()
    bin_labels: tuple[str, ...] = ()

    @property
    def cardinality(self) -> int:
        if self.kind == CATEGORICAL:
            return len(self.categories)
        return len(self.bin_edges) + 1

    @property
    def value_labels(self) -> tuple[str, ...]:
        return self.categories if self.kind == CATEGORICAL else self.bin_labels

    def __post_init__(self) -> None:
        if ":" in self.name or "|" in self.name:
            raise IngestError(
                f"feature name {self.name!r} may not contain ':' or '|' "
                "(reserved by slice identifiers)"
            )
        if self.kind == CATEGORICAL:
            if not self.categories:
                raise IngestError(f"categorical column {self.name!r} has no categories")
            if len(set(self.categories)) != len(self.categories):
                raise IngestError(f"categorical column {self.name!r} has duplicate categories")
        elif self.kind == CONTINUOUS:
            if any(
                self.bin_edges[i] >= self.bin_edges[i + 1]
                for i in range(len(self.bin_edges) - 1)
            ):
                raise IngestError(f"bin edges of column {self.name!r} are not strictly increasing")
            if len(self.bin_labels) != len(self.bin_edges) + 1:
                raise IngestError(
                    f"column {self.name!r} needs {len(self.bin_edges) + 1} bin labels, "
                    f"got {len(self.bin_labels)}"
                )
        else:
            raise IngestError(f"unknown column kind {self.kind!r}")


@dataclass(frozen=True)
class Dataset:
    """Encoded feature table: one int per (row, feature), MISSING allowed."""

    schemas: tuple[ColumnSchema, ...]
    encoded: np.ndarray  # shape (row_count, len(schemas)), dtype int32
    row_count: int

    @property
    def feature_names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.schemas)

    def schema_for(self, name: str) -> ColumnSchema:
        for s in self.schemas:
            if s.name == name:
                return s
        raise KeyError(name)


@dataclass(frozen=True)
class PredictionSet:
    """Model outputs aligned row-for-row with a Dataset."""

    y_true: np.ndarray  # int8 in {0,1}
    p_pos: np.ndarray  # float64 in [0,1]
    y_pred: np.ndarray  # int8 in {0,1}
    row_count: int


def _format_number(x: float) -> str:
    """Dataset-native rendering: integers without a decimal point, other
    values at shortest readable precision."""
    xf = float(x)
    if math.isfinite(xf) and xf == int(xf) and abs(xf) < 1e15:
        return str(int(xf))
    return repr(round(xf, 6))


def bin_continuous(
    values: Sequence[Union[float, None]], bins: int
) -> tuple[tuple[float, ...], np.ndarray]:
    """Equal-frequency binning of a numeric column.

    Returns (bin_edges, per-value bin index). Edges sit at the i/bins
    quantiles of the non-missing values; duplicate edges (heavy ties) are
    deduplicated, yielding fewer effective bins. A value maps to the first
    bin whose upper edge is >= the value; the last bin is unbounded above.
    Missing values (None/NaN) map to MISSING.
    """
    if bins < 2:
        raise IngestError(f"bins must be >= 2, got {bins}")
    arr = np.array(
        [np.nan if v is None else float(v) for v in values], dtype=np.float64
    )
    present = arr[~np.isnan(arr)]
    if np.unique(present).size < 2:
        raise IngestError(
            "fewer than 2 distinct values; declare this column categorical instead"
        )
    quantiles = np.quantile(present, [i / bins for i in range(1, bins)])
    edges = np.unique(quantiles)
    # An edge at the maximum would leave the unbounded last bin empty.
    edges = edges[edges < present.max()]
    indices = np.full(arr.shape, MISSING, dtype=np.int32)
    ok = ~np.isnan(arr)
    indices[ok] = np.searchsorted(edges, arr[ok], side="left")
    return tuple(float(e) for e in edges), indices


def _bin_labels(
    edges: Sequence[float], lo: float, hi: float
) -> tuple[str, ...]:
    """Human labels "lo–hi" per bin, bounded by the observed data range."""
    bounds = [lo, *edges, hi]
    labels = [
        f"{_format_number(bounds[i])}–{_format_number(bounds[i + 1])}"
        for i in range(len(bounds) - 1)
    ]
    if len(set(labels)) != len(labels):
        # Rounded rendering collided; fall back to full precision.
        labels = [
            f"{bounds[i]!r}–{bounds[i + 1]!r}" for i in range(len(bounds) - 1)
        ]
    return tuple(labels)


def _read_csv_table(path: Union[str, Path]) -> tuple[list[str], list[list[str]]]:
    p = Path(path)
    if not p.exists():
        raise IngestError(f"file not found: {p}")
    with open(p, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise IngestError(f"empty file: {p}") from None
        header = [h.strip() for h in header]
        rows: list[list[str]] = []
        for i, row in enumerate(reader):
            if len(row) != len(header):
                raise IngestError(
                    f"row {i + 1} of {p} has {len(row)} fields, expected {len(header)}"
                )
            rows.append([cell.strip() for cell in row])
    return header, rows


def _load_sidecar(path: Union[str, Path]) -> dict[str, dict]:
    p = Path(path)
    if not p.exists():
        raise IngestError(f"file not found: {p}")
    with open(p, encoding="utf-8") as fh:
        entries = json.load(fh)
    if not isinstance(entries, list):
        raise IngestError(f"schema sidecar {p} must be a JSON array")
    overrides: dict[str, dict] = {}
    for entry in entries:
        name = entry.get("name")
        kind = entry.get("kind")
        if not name or kind not in (CATEGORICAL, CONTINUOUS):
            raise IngestError(
                f"schema sidecar entries need a name and kind "
                f"'{CATEGORICAL}' or '{CONTINUOUS}': {entry!r}"
            )
        overrides[name] = entry
    return overrides


def _parse_numeric(cell: str) -> Optional[float]:
    try:
        return float(cell)
    except ValueError:
        return None


def load_dataset(
    path: Union[str, Path],
    label_column: str,
    bins: int = 4,
    schema_path: Optional[Union[str, Path]] = None,
) -> Dataset:
    """Load a CSV table, infer or apply per-column schemas, and encode rows.

    Columns whose non-missing values all parse as numbers and take more than
    ``bins`` distinct values become continuous (quantile-binned); everything
    else is categorical. The label column is excluded from slicing features.
    A sidecar file (JSON array of {name, kind, bins?}) overrides inference.
    """
    header, rows = _read_csv_table(path)
    if label_column not in header:
        raise IngestError(
            f"label column {label_column!r} not in header {header} of {path}"
        )
    if len(set(header)) != len(header):
        raise IngestError(f"duplicate column names in header of {path}")
    overrides = _load_sidecar(schema_path) if schema_path else {}

    feature_cols = [(i, name) for i, name in enumerate(header) if name != label_column]
    schemas: list[ColumnSchema] = []
    encoded_cols: list[np.ndarray] = []
    for col_idx, name in feature_cols:
        raw = [row[col_idx] for row in rows]
        cells = [None if c in MISSING_TOKENS else c for c in raw]
        numeric = [None if c is None else _parse_numeric(c) for c in cells]
        all_numeric = all(v is not None for c, v in zip(cells, numeric) if c is not None)
        distinct = {c for c in cells if c is not None}

        override = overrides.get(name)
        if override is not None:
            kind = override["kind"]
            col_bins = int(override.get("bins", bins))
            if kind == CONTINUOUS and not all_numeric:
                raise IngestError(
                    f"column {name!r} is declared continuous but has non-numeric values"
                )
        else:
            kind = CONTINUOUS if all_numeric and len(distinct) > bins else CATEGORICAL
            col_bins = bins

        if kind == CONTINUOUS:
            edges, indices = bin_continuous(numeric, col_bins)
            present = np.array([v for v in numeric if v is not None], dtype=np.float64)
            labels = _bin_labels(edges, float(present.min()), float(present.max()))
            schemas.append(
                ColumnSchema(name=name, kind=CONTINUOUS, bin_edges=edges, bin_labels=labels)
            )
            encoded_cols.append(indices)
        else:
            if not distinct:
                raise IngestError(f"column {name!r} has no non-missing values")
            categories = tuple(sorted(distinct))
            lookup = {c: i for i, c in enumerate(categories)}
            indices = np.array(
                [MISSING if c is None else lookup[c] for c in cells], dtype=np.int32
            )
            schemas.append(ColumnSchema(name=name, kind=CATEGORICAL, categories=categories))
            encoded_cols.append(indices)

    encoded = (
        np.column_stack(encoded_cols)
        if encoded_cols
        else np.empty((len(rows), 0), dtype=np.int32)
    )
    return Dataset(schemas=tuple(schemas), encoded=encoded, row_count=len(rows))


def _parse_binary_label(cell: str, column: str, row: int) -> int:
    value = _parse_numeric(cell)
    if value is None or value not in (0.0, 1.0):
        raise IngestError(
            f"non-binary label {cell!r} in column {column!r} at row {row}"
        )
    return int(value)


def load_predictions(path: Union[str, Path], n_rows: int) -> PredictionSet:
    """Load y_true, p_pos, and optionally y_pred from a CSV aligned with the
    dataset's row order. Absent y_pred defaults to thresholding p_pos at 0.5."""
    header, rows = _read_csv_table(path)
    if len(rows) != n_rows:
        raise IngestError(
            f"prediction file {path} has {len(rows)} rows, dataset has {n_rows}"
        )
    try:
        ti = header.index("y_true")
        pi = header.index("p_pos")
    except ValueError:
        raise IngestError(
            f"prediction file {path} must have columns y_true and p_pos, got {header}"
        ) from None
    yi = header.index("y_pred") if "y_pred" in header else None

    y_true = np.empty(n_rows, dtype=np.int8)
    p_pos = np.empty(n_rows, dtype=np.float64)
    y_pred = np.empty(n_rows, dtype=np.int8)
    for r, row in enumerate(rows, start=1):
        y_true[r - 1] = _parse_binary_label(row[ti], "y_true", r)
        p = _parse_numeric(row[pi])
        if p is None or not (0.0 <= p <= 1.0):
            raise IngestError(
                f"p_pos {row[pi]!r} outside [0, 1] at row {r} of {path}"
            )
        p_pos[r - 1] = p
        if yi is not None:
            y_pred[r - 1] = _parse_binary_label(row[yi], "y_pred", r)
        else:
            y_pred[r - 1] = 1 if p >= 0.5 else 0
    return PredictionSet(y_true=y_true, p_pos=p_pos, y_pred=y_pred, row_count=n_rows)
