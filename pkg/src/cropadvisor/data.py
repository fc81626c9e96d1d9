"""CSV ingestion for the three tabular corpora plus synthetic fixtures.

Loaders are strict: headers must match exactly, every cell must parse, and
failures carry 1-based row numbers. Nothing is coerced silently. The
synthetic generators produce corpora with the same shapes as the public ones
so the whole pipeline (and its tests) can run without third-party downloads.
"""

from __future__ import annotations

import csv
import math
import warnings
from pathlib import Path
from typing import Sequence

import numpy as np

from .domain import (
    CROP_MARKET_SCHEMA,
    CROP_SCHEMA,
    FeatureSchema,
    LabeledDataset,
    dataset_fingerprint,
    make_dataset,
)
from .forecast import PricePoint, PriceSeries


class DataError(ValueError):
    """A file failed structural or per-cell validation."""


CROP_HEADER = ["N", "P", "K", "temperature", "humidity", "ph", "rainfall", "label"]
CROP_PRICE_HEADER = ["N", "P", "K", "temperature", "humidity", "ph", "rainfall",
                     "market_price", "label"]
MARKET_HEADER = ["crop", "month", "year", "price"]
FERTILIZER_HEADER = ["N", "P", "K", "soil_type", "moisture", "temperature", "label"]

#: The 22 crops of the public recommendation corpus, in catalog (lexicographic) order.
CROP_NAMES = (
    "apple", "banana", "blackgram", "chickpea", "coconut", "coffee", "cotton",
    "grapes", "jute", "kidneybeans", "lentil", "maize", "mango", "mothbeans",
    "mungbean", "muskmelon", "orange", "papaya", "pigeonpeas", "pomegranate",
    "rice", "watermelon",
)

FERTILIZER_NAMES = ("10-26-26", "14-35-14", "17-17-17", "20-20", "28-28", "DAP", "Urea")
SOIL_TYPES = ("Black", "Clayey", "Loamy", "Red", "Sandy")


def _read_rows(path: str | Path, expected_header: list[str]) -> list[list[str]]:
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: file is empty, expected header {expected_header}")
        if header != expected_header:
            missing = [c for c in expected_header if c not in header]
            unexpected = [c for c in header if c not in expected_header]
            detail = []
            if missing:
                detail.append(f"missing columns: {missing}")
            if unexpected:
                detail.append(f"unexpected columns: {unexpected}")
            if not detail:
                detail.append(f"wrong column order: got {header}")
            raise DataError(f"{path}: header mismatch ({'; '.join(detail)})")
        return [row for row in reader]


def _parse_float(value: str, row_num: int, column: str) -> float:
    if value.strip() == "":
        raise DataError(f"row {row_num}: empty field '{column}'")
    try:
        out = float(value)
    except ValueError:
        raise DataError(f"row {row_num}: non-numeric value '{value}' in '{column}'") from None
    if not math.isfinite(out):
        raise DataError(f"row {row_num}: non-finite value in '{column}'")
    return out


def load_crop_dataset(path: str | Path, with_price: bool = False) -> LabeledDataset:
    """Load the 7-feature recommendation corpus or its price-augmented variant."""
    header = CROP_PRICE_HEADER if with_price else CROP_HEADER
    schema = CROP_MARKET_SCHEMA if with_price else CROP_SCHEMA
    raw = _read_rows(path, header)
    n_features = len(header) - 1
    x = np.empty((len(raw), n_features))
    labels = []
    for i, row in enumerate(raw):
        row_num = i + 2  # header is line 1
        if len(row) != len(header):
            raise DataError(f"row {row_num}: expected {len(header)} fields, got {len(row)}")
        for j in range(n_features):
            x[i, j] = _parse_float(row[j], row_num, header[j])
        label = row[-1].strip()
        if not label:
            raise DataError(f"row {row_num}: empty field 'label'")
        labels.append(label)
    return make_dataset(schema, x, labels)


def load_market_history(path: str | Path) -> dict[str, PriceSeries]:
    """One chronologically sorted PriceSeries per crop."""
    raw = _read_rows(path, MARKET_HEADER)
    by_crop: dict[str, dict[tuple[int, int], float]] = {}
    for i, row in enumerate(raw):
        row_num = i + 2
        if len(row) != 4:
            raise DataError(f"row {row_num}: expected 4 fields, got {len(row)}")
        crop = row[0].strip()
        if not crop:
            raise DataError(f"row {row_num}: empty field 'crop'")
        month = _parse_float(row[1], row_num, "month")
        year = _parse_float(row[2], row_num, "year")
        price = _parse_float(row[3], row_num, "price")
        if month != int(month) or not (1 <= int(month) <= 12):
            raise DataError(f"row {row_num}: month outside 1-12: {row[1]}")
        if year != int(year):
            raise DataError(f"row {row_num}: year must be an integer: {row[2]}")
        if price <= 0:
            raise DataError(f"row {row_num}: non-positive price: {row[3]}")
        key = (int(year), int(month))
        series = by_crop.setdefault(crop, {})
        if key in series:
            raise DataError(
                f"row {row_num}: duplicate timestamp ({crop}, {key[0]}, {key[1]})"
            )
        series[key] = price
    out = {}
    for crop, points in by_crop.items():
        ordered = sorted(points.items())
        out[crop] = PriceSeries(
            crop, tuple(PricePoint(y, m, p) for (y, m), p in ordered)
        )
    return out


def fertilizer_dataset_from_rows(rows: Sequence[tuple]) -> LabeledDataset:
    """Build the one-hot-expanded fertilizer dataset from parsed row tuples.

    Rows are (N, P, K, soil_type, moisture, temperature, label). One-hot
    column order is lexicographic over the observed categories and recorded in
    the schema's feature names as ``soil_type=<category>``.
    """
    numeric_names = ("n", "p", "k", "moisture", "temperature")
    values = np.empty((len(rows), 5))
    soils: list[str] = []
    labels: list[str] = []
    for i, (n, p, k, soil, moisture, temperature, label) in enumerate(rows):
        values[i] = (n, p, k, moisture, temperature)
        soils.append(soil)
        labels.append(label)
    categories = tuple(sorted(set(soils)))
    onehot = np.zeros((len(rows), len(categories)))
    cat_index = {c: j for j, c in enumerate(categories)}
    for i, soil in enumerate(soils):
        onehot[i, cat_index[soil]] = 1.0
    schema = FeatureSchema(
        "fertilizer", numeric_names + tuple(f"soil_type={c}" for c in categories)
    )
    return make_dataset(schema, np.hstack([values, onehot]), labels)


def load_fertilizer_dataset(path: str | Path) -> LabeledDataset:
    """Load the fertilizer corpus, one-hot expanding soil_type."""
    raw = _read_rows(path, FERTILIZER_HEADER)
    parsed: list[tuple] = []
    for i, row in enumerate(raw):
        row_num = i + 2
        if len(row) != len(FERTILIZER_HEADER):
            raise DataError(
                f"row {row_num}: expected {len(FERTILIZER_HEADER)} fields, got {len(row)}"
            )
        numeric = {
            name: _parse_float(row[j], row_num, name)
            for j, name in ((0, "N"), (1, "P"), (2, "K"), (4, "moisture"), (5, "temperature"))
        }
        soil = row[3].strip()
        if not soil:
            raise DataError(f"row {row_num}: empty field 'soil_type'")
        label = row[6].strip()
        if not label:
            raise DataError(f"row {row_num}: empty field 'label'")
        parsed.append(
            (numeric["N"], numeric["P"], numeric["K"], soil,
             numeric["moisture"], numeric["temperature"], label)
        )
    return fertilizer_dataset_from_rows(parsed)


def soil_categories_from_schema(schema: FeatureSchema) -> tuple[str, ...]:
    return tuple(
        name.split("=", 1)[1] for name in schema.feature_names if name.startswith("soil_type=")
    )


def synth_market_series(
    seed: int,
    *,
    base: float = 100.0,
    slope: float = 2.0,
    amplitude: float = 10.0,
    noise_sigma: float = 1.0,
    n_months: int = 36,
    start_year: int = 2020,
    start_month: int = 1,
    crop_id: str = "synthetic",
) -> PriceSeries:
    """price(t) = base + slope*t + amplitude*sin(2*pi*month/12) + N(0, sigma).

    `t` counts months from the first point (0-based); `month` is the calendar
    month. Non-positive draws are clamped to 0.01 with a warning.
    """
    if n_months < 1:
        raise ValueError("n_months must be >= 1")
    rng = np.random.default_rng(seed)
    points = []
    year, month = start_year, start_month
    clamped = 0
    for t in range(n_months):
        price = (
            base
            + slope * t
            + amplitude * math.sin(2.0 * math.pi * month / 12.0)
            + (rng.normal(0.0, noise_sigma) if noise_sigma > 0 else 0.0)
        )
        if price <= 0:
            price = 0.01
            clamped += 1
        points.append(PricePoint(year, month, price))
        month += 1
        if month > 12:
            month = 1
            year += 1
    if clamped:
        warnings.warn(f"synth_market_series: {clamped} non-positive prices clamped to 0.01")
    return PriceSeries(crop_id, tuple(points))


def synth_crop_corpus(
    seed: int = 20_22,
    n_per_class: int = 100,
    with_price: bool = True,
    crops: Sequence[str] = CROP_NAMES,
    spread: float = 0.075,
) -> LabeledDataset:
    """Synthetic stand-in for the 2,200-row recommendation corpus.

    Structure mirrors what makes the real corpus interesting: each crop
    occupies characteristic envelopes per feature; some features per crop are
    bimodal (two alternative envelopes); a few feature pairs are strongly
    correlated within a class; and two of the agronomic features carry no
    class signal at all. The mixture + correlation structure keeps one linear
    boundary (and one Gaussian per class) from being sufficient while tree
    ensembles remain comfortable.
    """
    rng = np.random.default_rng(seed)
    ranges = [
        (0.0, 140.0),    # n
        (5.0, 145.0),    # p
        (5.0, 205.0),    # k
        (8.0, 44.0),     # temperature
        (14.0, 100.0),   # humidity
        (3.5, 9.9),      # ph
        (20.0, 300.0),   # rainfall
        (800.0, 8000.0), # market_price
    ]
    arity = 8 if with_price else 7
    noise_features = rng.choice(7, size=2, replace=False)  # uninformative everywhere
    rows = []
    labels = []
    for crop in crops:
        centers_a = np.array([rng.uniform(lo, hi) for lo, hi in ranges[:arity]])
        centers_b = centers_a.copy()
        bimodal = rng.choice(arity, size=3, replace=False)
        for j in bimodal:
            lo, hi = ranges[j]
            centers_b[j] = rng.uniform(lo, hi)
        spreads = np.array([spread * (hi - lo) for lo, hi in ranges[:arity]])
        noise = rng.normal(0.0, 1.0, size=(n_per_class, arity))
        perm = rng.permutation(arity)
        for p in range(3):  # correlate three feature pairs within the class
            i, j = perm[2 * p % arity], perm[(2 * p + 1) % arity]
            if i != j:
                noise[:, j] = 0.95 * noise[:, i] + math.sqrt(1 - 0.95**2) * noise[:, j]
        pick_b = rng.random((n_per_class, 1)) < 0.5
        centers = np.where(pick_b, centers_b, centers_a)
        block = centers + noise * spreads
        for j in noise_features:
            lo, hi = ranges[j]
            block[:, j] = rng.uniform(lo, hi, size=n_per_class)
        block[:, 5] = np.clip(block[:, 5], 0.0, 14.0)
        block[:, 4] = np.clip(block[:, 4], 0.0, 100.0)
        for j, (lo, hi) in enumerate(ranges[:arity]):
            if j not in (4, 5):
                block[:, j] = np.clip(block[:, j], 0.01, hi * 1.25)
        rows.append(block)
        labels += [crop] * n_per_class
    schema = CROP_MARKET_SCHEMA if with_price else CROP_SCHEMA
    return make_dataset(schema, np.vstack(rows), labels)


def synth_fertilizer_rows(seed: int = 500, n_rows: int = 500) -> list[tuple]:
    """Raw (N, P, K, soil_type, moisture, temperature, label) tuples."""
    rng = np.random.default_rng(seed)
    rows = []
    for _ in range(n_rows):
        label_idx = int(rng.integers(0, len(FERTILIZER_NAMES)))
        label = FERTILIZER_NAMES[label_idx]
        # each fertilizer type sits in its own NPK neighborhood
        base = 10.0 + 5.0 * label_idx
        n = base + rng.normal(0, 1.5)
        p = 40.0 - 4.0 * label_idx + rng.normal(0, 1.5)
        k = 5.0 + 3.0 * label_idx + rng.normal(0, 1.2)
        soil = SOIL_TYPES[int(rng.integers(0, len(SOIL_TYPES)))]
        moisture = rng.uniform(25, 65)
        temperature = rng.uniform(25, 38)
        rows.append(
            (round(max(n, 0), 2), round(max(p, 0), 2), round(max(k, 0), 2),
             soil, round(moisture, 2), round(temperature, 2), label)
        )
    return rows


def synth_market_table(
    seed: int = 11,
    crops: Sequence[str] = CROP_NAMES[:11],
    n_months: int = 48,
) -> dict[str, PriceSeries]:
    """One synthetic series per crop with crop-specific trend and seasonality."""
    rng = np.random.default_rng(seed)
    out = {}
    for i, crop in enumerate(crops):
        out[crop] = synth_market_series(
            seed + 100 + i,
            base=float(rng.uniform(900, 6000)),
            slope=float(rng.uniform(-6, 12)),
            amplitude=float(rng.uniform(20, 180)),
            noise_sigma=float(rng.uniform(5, 30)),
            n_months=n_months,
            crop_id=crop,
        )
    return out


def write_crop_csv(dataset: LabeledDataset, path: str | Path) -> None:
    with_price = dataset.schema.schema_id == CROP_MARKET_SCHEMA.schema_id
    header = CROP_PRICE_HEADER if with_price else CROP_HEADER
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row, label in zip(dataset.x, dataset.labels):
            writer.writerow([repr(float(v)) for v in row] + [label])


def write_market_csv(series_by_crop: dict[str, PriceSeries], path: str | Path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(MARKET_HEADER)
        for crop in sorted(series_by_crop):
            for pt in series_by_crop[crop].points:
                writer.writerow([crop, pt.month, pt.year, repr(float(pt.price))])


def write_fertilizer_csv(rows: Sequence[tuple], path: str | Path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(FERTILIZER_HEADER)
        for row in rows:
            writer.writerow(row)


__all__ = [
    "CROP_HEADER",
    "CROP_NAMES",
    "CROP_PRICE_HEADER",
    "DataError",
    "FERTILIZER_HEADER",
    "FERTILIZER_NAMES",
    "MARKET_HEADER",
    "SOIL_TYPES",
    "dataset_fingerprint",
    "fertilizer_dataset_from_rows",
    "load_crop_dataset",
    "load_fertilizer_dataset",
    "load_market_history",
    "soil_categories_from_schema",
    "synth_crop_corpus",
    "synth_fertilizer_rows",
    "synth_market_series",
    "synth_market_table",
    "write_crop_csv",
    "write_fertilizer_csv",
    "write_market_csv",
]
