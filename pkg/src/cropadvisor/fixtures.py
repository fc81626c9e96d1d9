"""Bundle assembly: the real training pipeline and small calibration fixtures."""

from __future__ import annotations

import warnings

from .bundle import ModelBundle
from .data import (
    fertilizer_dataset_from_rows,
    synth_crop_corpus,
    synth_fertilizer_rows,
    synth_market_table,
)
from .domain import (
    CROP_SCHEMA,
    LabeledDataset,
    StandardizerParams,
    dataset_fingerprint,
    fit_standardizer,
)
from .forecast import (
    ForecastConfig,
    InsufficientHistoryError,
    PriceModel,
    PricePoint,
    PriceSeries,
    fit_price_model,
)
from .models import ForestConfig, RandomForestModel, fit_decision_tree, fit_random_forest
from .models.tree import TreeNode

import numpy as np


def train_bundle(
    crop_dataset: LabeledDataset,
    fertilizer_dataset: LabeledDataset,
    market_history: dict[str, PriceSeries],
    forest_config: ForestConfig | None = None,
    forecast_config: ForecastConfig | None = None,
    created_at: str = "",
) -> ModelBundle:
    """Fit every sub-model and assemble a servable bundle.

    Crops whose price history is too short to fit are skipped with a warning;
    the advisory layer gives them the neutral price score.
    """
    if crop_dataset.schema.schema_id != CROP_SCHEMA.schema_id:
        raise ValueError(
            "the advisory forest trains on the 7-feature agronomic schema, got "
            f"'{crop_dataset.schema.schema_id}'"
        )
    forest = fit_random_forest(crop_dataset, forest_config or ForestConfig())
    standardizer = fit_standardizer(crop_dataset)
    fertilizer_model = fit_decision_tree(fertilizer_dataset)
    price_models: dict[str, PriceModel] = {}
    for crop, series in sorted(market_history.items()):
        try:
            price_models[crop] = fit_price_model(series, forecast_config)
        except InsufficientHistoryError as exc:
            warnings.warn(f"skipping price model for '{crop}': {exc}")
    return ModelBundle(
        forest=forest,
        crop_schema=crop_dataset.schema,
        standardizer=standardizer,
        fertilizer_model=fertilizer_model,
        fertilizer_schema=fertilizer_dataset.schema,
        price_models=price_models,
        price_history=dict(sorted(market_history.items())),
        fingerprints={
            "crop_dataset": dataset_fingerprint(crop_dataset),
            "fertilizer_dataset": dataset_fingerprint(fertilizer_dataset),
        },
        created_at=created_at,
    )


def _constant_price_model(crop: str, price: float, sigma: float = 5.0) -> PriceModel:
    """An exact constant model: trend = price, no seasonality, fixed band."""
    return PriceModel(
        crop_id=crop,
        t0_index=2022 * 12,       # Jan 2022
        t1_index=2022 * 12 + 23,  # Dec 2023
        intercept=price,
        slope=0.0,
        changepoints=(),
        changepoint_deltas=(),
        fourier_order=0,
        fourier_coeffs=(),
        ridge_lambda=1.0,
        residual_sigma=sigma,
        last_year=2023,
        last_month=12,
    )


def _constant_series(crop: str, price: float) -> PriceSeries:
    points = []
    year, month = 2022, 1
    for _ in range(24):
        points.append(PricePoint(year, month, price))
        month += 1
        if month > 12:
            month, year = 1, year + 1
    return PriceSeries(crop, tuple(points))


def comparative_fixture_bundle() -> ModelBundle:
    """Four-crop calibration bundle reproducing the two-factor decision example.

    The forest is a single leaf with vote counts (10, 85, 3, 2), so every soil
    input yields suitability 0.85 for Crop B; constant price models at
    (115, 180, 100, 200) min-max to price scores (0.15, 0.80, 0.0, 1.0). With
    default weights Crop B tops the ranking at 0.6*0.85 + 0.4*0.80 = 0.830
    even though its raw price score is below Crop D's.
    """
    catalog = ("Crop A", "Crop B", "Crop C", "Crop D")
    leaf = TreeNode(counts=np.asarray([10, 85, 3, 2], dtype=np.int64), n_samples=100)
    forest = RandomForestModel(
        trees=(leaf,),
        class_catalog=catalog,
        feature_arity=CROP_SCHEMA.arity,
        feature_names=CROP_SCHEMA.feature_names,
        oob_masks=np.zeros((1, 0), dtype=bool),
        config=ForestConfig(n_trees=1, bootstrap=False, features_per_split="all", seed=0),
    )
    prices = {"Crop A": 115.0, "Crop B": 180.0, "Crop C": 100.0, "Crop D": 200.0}
    fertilizer_dataset = fertilizer_dataset_from_rows(synth_fertilizer_rows(seed=1, n_rows=80))
    return ModelBundle(
        forest=forest,
        crop_schema=CROP_SCHEMA,
        standardizer=StandardizerParams((0.0,) * 7, (1.0,) * 7),
        fertilizer_model=fit_decision_tree(fertilizer_dataset),
        fertilizer_schema=fertilizer_dataset.schema,
        price_models={c: _constant_price_model(c, p) for c, p in prices.items()},
        price_history={c: _constant_series(c, p) for c, p in prices.items()},
        fingerprints={"fixture": {"rows": 0, "classes": len(catalog), "sha256": "fixture"}},
        created_at="fixture",
    )


def synthetic_demo_bundle(seed: int = 7, n_trees: int = 50) -> ModelBundle:
    """A full 22-crop bundle trained on synthetic corpora (no downloads needed)."""
    crop_ds = synth_crop_corpus(seed=seed, n_per_class=100, with_price=False)
    fert_ds = fertilizer_dataset_from_rows(synth_fertilizer_rows(seed=seed + 1, n_rows=500))
    market = synth_market_table(seed=seed + 2)
    return train_bundle(
        crop_ds,
        fert_ds,
        market,
        forest_config=ForestConfig(n_trees=n_trees, seed=seed),
        created_at="synthetic-demo",
    )
