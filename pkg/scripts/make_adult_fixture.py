#!/usr/bin/env python3
"""Generate the bundled census-income fixture: a 48,842-row tabular dataset
shaped like the classic adult census extraction (same columns, realistic
marginals and correlations, '?' missing markers) plus logistic-style model
predictions over it.

The prediction model is a noisy, shrunken version of the true label logit,
with two planted subgroups: one where predictions are close to noise
(underperforming) and one where they are near-perfect (overperforming), so
a default analysis at effect threshold 0.4 surfaces both kinds.

Deterministic: fixed RNG seed, stable output bytes. Rerun with
    python3 scripts/make_adult_fixture.py
to regenerate fixtures/adult/{adult.csv,predictions.csv}.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

SEED = 48842
N_ROWS = 48842

OUT_DIR = Path(__file__).resolve().parent.parent / "fixtures" / "adult"

EDUCATION = [
    ("HS-grad", 9, 0.322), ("Some-college", 10, 0.223), ("Bachelors", 13, 0.164),
    ("Masters", 14, 0.054), ("Assoc-voc", 11, 0.042), ("11th", 7, 0.037),
    ("Assoc-acdm", 12, 0.033), ("10th", 6, 0.028), ("7th-8th", 4, 0.020),
    ("Prof-school", 15, 0.017), ("9th", 5, 0.016), ("12th", 8, 0.013),
    ("Doctorate", 16, 0.012), ("5th-6th", 3, 0.010), ("1st-4th", 2, 0.006),
    ("Preschool", 1, 0.003),
]

WORKCLASS = [
    ("Private", 0.694), ("Self-emp-not-inc", 0.079), ("Local-gov", 0.064),
    ("?", 0.057), ("State-gov", 0.040), ("Self-emp-inc", 0.034),
    ("Federal-gov", 0.029), ("Without-pay", 0.002), ("Never-worked", 0.001),
]

OCCUPATION = [
    ("Prof-specialty", 0.127, 0.45), ("Craft-repair", 0.126, 0.00),
    ("Exec-managerial", 0.125, 0.55), ("Adm-clerical", 0.116, -0.05),
    ("Sales", 0.113, 0.15), ("Other-service", 0.101, -0.65),
    ("Machine-op-inspct", 0.062, -0.25), ("Transport-moving", 0.048, -0.10),
    ("Handlers-cleaners", 0.042, -0.45), ("Farming-fishing", 0.031, -0.50),
    ("Tech-support", 0.029, 0.30), ("Protective-serv", 0.020, 0.20),
    ("Priv-house-serv", 0.005, -1.00), ("Armed-Forces", 0.001, 0.00),
]

MARITAL = [
    ("Married-civ-spouse", 0.458), ("Never-married", 0.330), ("Divorced", 0.136),
    ("Separated", 0.031), ("Widowed", 0.025), ("Married-spouse-absent", 0.019),
    ("Married-AF-spouse", 0.001),
]

RACE = [
    ("White", 0.855), ("Black", 0.096), ("Asian-Pac-Islander", 0.031),
    ("Amer-Indian-Eskimo", 0.010), ("Other", 0.008),
]

NATIVE_COUNTRY = [
    ("United-States", 0.8955), ("Mexico", 0.0196), ("?", 0.0175),
    ("Philippines", 0.0061), ("Germany", 0.0042), ("Puerto-Rico", 0.0037),
    ("Canada", 0.0037), ("El-Salvador", 0.0032), ("India", 0.0031),
    ("Cuba", 0.0028), ("England", 0.0026), ("China", 0.0025),
    ("South", 0.0023), ("Jamaica", 0.0022), ("Italy", 0.0021),
    ("Dominican-Republic", 0.0021), ("Japan", 0.0019), ("Guatemala", 0.0018),
    ("Poland", 0.0018), ("Vietnam", 0.0017), ("Columbia", 0.0017),
    ("Haiti", 0.0015), ("Portugal", 0.0013), ("Taiwan", 0.0013),
    ("Iran", 0.0012), ("Greece", 0.0010), ("Nicaragua", 0.0010),
    ("Peru", 0.0009), ("Ecuador", 0.0009), ("France", 0.0008),
    ("Ireland", 0.0008), ("Hong", 0.0007), ("Thailand", 0.0006),
    ("Cambodia", 0.0006), ("Trinadad&Tobago", 0.0006), ("Laos", 0.0005),
    ("Yugoslavia", 0.0005), ("Outlying-US(Guam-USVI-etc)", 0.0005),
    ("Scotland", 0.0004), ("Honduras", 0.0004), ("Hungary", 0.0004),
    ("Holand-Netherlands", 0.0001),
]


def _choice(rng: np.random.Generator, table, n: int) -> np.ndarray:
    names = [t[0] for t in table]
    probs = np.array([t[-1] if len(t) == 2 else t[2] for t in table], dtype=float)
    return rng.choice(names, size=n, p=probs / probs.sum())


def sigmoid(z: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-z))


def generate() -> tuple[list[list[str]], list[list[str]]]:
    rng = np.random.default_rng(SEED)
    n = N_ROWS

    sex = rng.choice(["Male", "Female"], size=n, p=[0.669, 0.331])
    age = np.clip(rng.gamma(5.0, 5.6, size=n) + 17, 17, 90).astype(int)

    edu_names = [e[0] for e in EDUCATION]
    edu_probs = np.array([e[2] for e in EDUCATION])
    education = rng.choice(edu_names, size=n, p=edu_probs / edu_probs.sum())
    edu_num_map = {name: num for name, num, _ in EDUCATION}
    education_num = np.array([edu_num_map[e] for e in education])

    workclass = _choice(rng, WORKCLASS, n)
    occ_names = [o[0] for o in OCCUPATION]
    occ_probs = np.array([o[1] for o in OCCUPATION])
    occupation = rng.choice(occ_names, size=n, p=occ_probs / occ_probs.sum())
    occupation = np.where(workclass == "?", "?", occupation)
    occ_effect_map = {name: eff for name, _, eff in OCCUPATION}
    occ_effect = np.array([occ_effect_map.get(o, -0.10) for o in occupation])

    marital = _choice(rng, MARITAL, n)
    # The young are overwhelmingly never-married.
    young = age < 25
    young_marital = rng.choice(
        ["Never-married", "Married-civ-spouse", "Divorced"],
        size=int(young.sum()),
        p=[0.86, 0.11, 0.03],
    )
    marital = marital.copy()
    marital[young] = young_marital

    married = np.isin(marital, ["Married-civ-spouse", "Married-AF-spouse"])
    spouse_role = np.where(sex == "Male", "Husband", "Wife")
    other_role = rng.choice(
        ["Not-in-family", "Own-child", "Unmarried", "Other-relative"],
        size=n,
        p=[0.53, 0.21, 0.18, 0.08],
    )
    # Unmarried under-25s mostly still live at home.
    other_role = np.where(
        ~married & young & (rng.random(n) < 0.7), "Own-child", other_role
    )
    relationship = np.where(married, spouse_role, other_role)

    race = _choice(rng, RACE, n)
    fnlwgt = np.clip(rng.lognormal(12.0, 0.47, size=n), 13000, 1490400).astype(int)

    has_gain = rng.random(n) < 0.084
    capital_gain = np.where(
        has_gain, np.clip(rng.lognormal(8.6, 1.1, size=n), 114, 99999), 0
    ).astype(int)
    has_loss = rng.random(n) < 0.047
    capital_loss = np.where(
        has_loss, np.clip(rng.normal(1870, 350, size=n), 155, 4356), 0
    ).astype(int)

    standard_week = rng.random(n) < 0.46
    hours = np.where(
        standard_week, 40, np.clip(rng.normal(40.5, 12.3, size=n), 1, 99)
    ).astype(int)

    native_country = _choice(rng, NATIVE_COUNTRY, n)

    # True income logit: education, age (peaking in the 50s), hours, marriage,
    # capital events, occupation, and a sex disparity as in the source data.
    z_true = (
        -8.95
        + 0.40 * education_num
        + 0.052 * age
        - 0.00052 * (age - 50) ** 2
        + 0.030 * (hours - 40)
        + 1.50 * married
        + 0.40 * (sex == "Male")
        + 1.10 * (capital_gain > 5000)
        + 0.45 * (capital_loss > 1500)
        + occ_effect
    )
    y = (rng.random(n) < sigmoid(z_true)).astype(int)

    # Model logit: shrunk and noisy but broadly calibrated...
    z_model = 0.85 * z_true + rng.normal(0.0, 0.55, size=n) + 0.15

    # ...except in two planted subgroups. Female machine operators get
    # near-noise predictions; high-education incorporated self-employed get
    # near-perfect ones.
    degraded = (occupation == "Machine-op-inspct") & (sex == "Female")
    z_model[degraded] = 0.15 * z_true[degraded] + rng.normal(
        0.0, 1.8, size=int(degraded.sum())
    )
    sharpened = (workclass == "Self-emp-inc") & (education_num >= 14)
    z_model[sharpened] = np.where(y[sharpened] == 1, 5.5, -5.5) + rng.normal(
        0.0, 0.3, size=int(sharpened.sum())
    )

    p_pos = np.round(sigmoid(z_model), 6)
    y_pred = (p_pos >= 0.5).astype(int)

    header = [
        "age", "workclass", "fnlwgt", "education", "education-num",
        "marital-status", "occupation", "relationship", "race", "sex",
        "capital-gain", "capital-loss", "hours-per-week", "native-country",
        "income",
    ]
    data_rows = [header]
    for i in range(n):
        data_rows.append(
            [
                str(age[i]), workclass[i], str(fnlwgt[i]), education[i],
                str(education_num[i]), marital[i], occupation[i],
                relationship[i], race[i], sex[i], str(capital_gain[i]),
                str(capital_loss[i]), str(hours[i]), native_country[i],
                ">50K" if y[i] else "<=50K",
            ]
        )
    pred_rows = [["y_true", "p_pos", "y_pred"]]
    for i in range(n):
        pred_rows.append([str(y[i]), f"{p_pos[i]:.6f}", str(y_pred[i])])
    return data_rows, pred_rows


def main() -> None:
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    data_rows, pred_rows = generate()
    with open(OUT_DIR / "adult.csv", "w", newline="", encoding="utf-8") as fh:
        csv.writer(fh, lineterminator="\n").writerows(data_rows)
    with open(OUT_DIR / "predictions.csv", "w", newline="", encoding="utf-8") as fh:
        csv.writer(fh, lineterminator="\n").writerows(pred_rows)
    positives = sum(1 for r in data_rows[1:] if r[-1] == ">50K")
    print(
        f"wrote {len(data_rows) - 1} rows to {OUT_DIR} "
        f"(positive rate {positives / (len(data_rows) - 1):.3f})"
    )


if __name__ == "__main__":
    main()
