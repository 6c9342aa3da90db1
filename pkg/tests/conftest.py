from __future__ import annotations

import random
from pathlib import Path

import pytest

from sliceaudit import load_dataset, load_predictions

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures" / "adult"


def write_csv(path: Path, header: list[str], rows: list[list[str]]) -> Path:
    lines = [",".join(header)] + [",".join(row) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def make_random_tables(
    rng: random.Random,
    n_rows: int,
    n_features: int,
    missing_rate: float = 0.05,
    include_y_pred: bool = True,
) -> tuple[list[str], list[list[str]], list[str], list[list[str]]]:
    """Random mixed-type dataset + prediction table as CSV cells.

    Continuous p_pos values keep per-row losses distinct, so slice/complement
    loss ties (and the constant-group special cases) stay deliberate test
    territory rather than accidents.
    """
    header: list[str] = []
    columns: list[list[str]] = []
    for f in range(n_features):
        name = f"f{f}"
        header.append(name)
        kind = rng.choice(["categorical", "continuous", "skewed"])
        col: list[str] = []
        if kind == "categorical":
            values = [f"v{j}" for j in range(rng.randint(2, 5))]
            for _ in range(n_rows):
                if rng.random() < missing_rate:
                    col.append(rng.choice(["", "?"]))
                else:
                    col.append(rng.choice(values))
        elif kind == "continuous":
            for _ in range(n_rows):
                if rng.random() < missing_rate:
                    col.append("")
                else:
                    col.append(f"{rng.gauss(50, 15):.4f}")
        else:  # heavy ties: exercises quantile-edge deduplication
            for _ in range(n_rows):
                if rng.random() < missing_rate:
                    col.append("?")
                else:
                    col.append(
                        "0" if rng.random() < 0.8 else str(rng.randint(1, 2000))
                    )
        columns.append(col)
    header.append("label")

    data_rows = []
    pred_rows = []
    for i in range(n_rows):
        y = rng.randint(0, 1)
        p = round(rng.uniform(0.01, 0.99), 6)
        data_rows.append([columns[f][i] for f in range(n_features)] + [str(y)])
        if include_y_pred:
            pred_rows.append([str(y), f"{p}", "1" if p >= 0.5 else "0"])
        else:
            pred_rows.append([str(y), f"{p}"])
    pred_header = ["y_true", "p_pos", "y_pred"] if include_y_pred else ["y_true", "p_pos"]
    return header, data_rows, pred_header, pred_rows


def load_random_pair(tmp_path: Path, seed: int, n_rows: int, n_features: int, bins: int = 3):
    rng = random.Random(seed)
    header, rows, pred_header, pred_rows = make_random_tables(rng, n_rows, n_features)
    data_path = write_csv(tmp_path / f"data_{seed}.csv", header, rows)
    pred_path = write_csv(tmp_path / f"preds_{seed}.csv", pred_header, pred_rows)
    dataset = load_dataset(data_path, "label", bins=bins)
    preds = load_predictions(pred_path, dataset.row_count)
    return dataset, preds


@pytest.fixture(scope="session")
def adult_paths() -> tuple[Path, Path]:
    data = FIXTURES / "adult.csv"
    preds = FIXTURES / "predictions.csv"
    if not data.exists() or not preds.exists():
        pytest.fail(
            "adult fixture missing; regenerate with scripts/make_adult_fixture.py"
        )
    return data, preds


@pytest.fixture(scope="session")
def adult_data(adult_paths):
    data_path, pred_path = adult_paths
    dataset = load_dataset(data_path, "income", bins=4)
    preds = load_predictions(pred_path, dataset.row_count)
    return dataset, preds
