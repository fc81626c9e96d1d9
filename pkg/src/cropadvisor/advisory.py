"""Profit-aware decision core: composite scoring, crop ranking, fertilizer advice.

The composite score blends agronomic suitability with the normalized
forecasted market price: ``score = w1 * p_yield + w2 * g_price``. Both
operands live in [0, 1]; the weights are non-negative and sum to 1 (defaults
0.6 / 0.4, overridable per request). Suitability inputs are per-crop scores
in [0, 1] and are not required to sum to 1: a classifier posterior is the
usual source, but calibration fixtures feed independent per-crop values.

Crops with no market data receive the neutral price score 0.5 and are
flagged, so a full catalog can be ranked even when the price corpus covers
only part of it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .domain import FeatureSchema, FeatureVector, ValidationError

NEUTRAL_PRICE_SCORE = 0.5


@dataclass(frozen=True)
class ScoreWeights:
    w1: float = 0.6
    w2: float = 0.4

    def __post_init__(self):
        if self.w1 < 0 or self.w2 < 0:
            raise ValidationError([("weights", "weights must be >= 0")])
        if abs(self.w1 + self.w2 - 1.0) > 1e-9:
            raise ValidationError([("weights", "weights must sum to 1")])


@dataclass(frozen=True)
class CropRecommendation:
    crop_id: str
    p_yield: float
    g_price: float
    score: float
    no_market_data: bool = False


@dataclass(frozen=True)
class RankedAdvisory:
    """Recommendations sorted by descending score; the head is the optimal crop.

    Ties break by descending p_yield, then lexicographic crop name.
    """

    recommendations: tuple[CropRecommendation, ...]
    weights: ScoreWeights

    @property
    def top(self) -> CropRecommendation:
        return self.recommendations[0]


def _check_unit_range(name: str, value: float) -> None:
    if not (0.0 <= value <= 1.0):
        raise ValidationError([(name, f"{name} out of [0,1]: {value}")])


def composite_score(p_yield: float, g_price: float, weights: ScoreWeights | None = None) -> float:
    w = weights or ScoreWeights()
    _check_unit_range("p_yield", p_yield)
    _check_unit_range("g_price", g_price)
    return w.w1 * p_yield + w.w2 * g_price


def rank_crops(
    suitability: Mapping[str, float],
    g_scores: Mapping[str, float],
    weights: ScoreWeights | None = None,
) -> RankedAdvisory:
    """Score every crop in `suitability` and sort into a RankedAdvisory.

    Crops absent from `g_scores` get the neutral 0.5 price score and a
    no-market-data flag.
    """
    if not suitability:
        raise ValidationError([("catalog", "cannot rank an empty crop catalog")])
    w = weights or ScoreWeights()
    recs = []
    for crop, p in suitability.items():
        _check_unit_range(f"suitability[{crop}]", p)
        missing = crop not in g_scores
        g = NEUTRAL_PRICE_SCORE if missing else g_scores[crop]
        _check_unit_range(f"g_scores[{crop}]", g)
        recs.append(
            CropRecommendation(
                crop_id=crop,
                p_yield=float(p),
                g_price=float(g),
                score=composite_score(p, g, w),
                no_market_data=missing,
            )
        )
    recs.sort(key=lambda r: (-r.score, -r.p_yield, r.crop_id))
    return RankedAdvisory(tuple(recs), w)


def posterior_to_mapping(posterior: np.ndarray, class_catalog: tuple[str, ...]) -> dict[str, float]:
    """Pair a classifier posterior vector with its catalog."""
    if len(posterior) != len(class_catalog):
        raise ValidationError(
            [("posterior", "posterior length does not match class catalog")]
        )
    return {crop: float(p) for crop, p in zip(class_catalog, posterior)}


@dataclass(frozen=True)
class FertilizerAdvice:
    fertilizer_type: str
    posterior: dict[str, float]


def encode_fertilizer_features(
    schema: FeatureSchema,
    *,
    n: float,
    p: float,
    k: float,
    soil_type: str,
    moisture: float,
    temperature: float,
) -> FeatureVector:
    """One-hot encode raw fertilizer inputs against the model's schema.

    An unseen soil_type is a validation error listing the known categories.
    """
    onehot_name = f"soil_type={soil_type}"
    known = [name.split("=", 1)[1] for name in schema.feature_names
             if name.startswith("soil_type=")]
    if onehot_name not in schema.feature_names:
        raise ValidationError(
            [("soil_type",
              f"unknown soil type '{soil_type}'; known categories: {', '.join(known)}")]
        )
    by_name = {
        "n": float(n),
        "p": float(p),
        "k": float(k),
        "moisture": float(moisture),
        "temperature": float(temperature),
    }
    values = []
    for name in schema.feature_names:
        if name.startswith("soil_type="):
            values.append(1.0 if name == onehot_name else 0.0)
        else:
            values.append(by_name[name])
    return FeatureVector(tuple(values), schema.schema_id)


def recommend_fertilizer(
    model,
    schema: FeatureSchema,
    *,
    n: float,
    p: float,
    k: float,
    soil_type: str,
    moisture: float,
    temperature: float,
) -> FertilizerAdvice:
    """Classify raw fertilizer inputs with the bundled tree or forest model."""
    vector = encode_fertilizer_features(
        schema, n=n, p=p, k=k, soil_type=soil_type, moisture=moisture,
        temperature=temperature,
    )
    proba = model.predict_vector(vector)
    best = int(np.argmax(proba))
    return FertilizerAdvice(
        fertilizer_type=model.class_catalog[best],
        posterior={c: float(v) for c, v in zip(model.class_catalog, proba)},
    )
