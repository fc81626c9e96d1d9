import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cropadvisor.advisory import (
    ScoreWeights,
    composite_score,
    encode_fertilizer_features,
    posterior_to_mapping,
    rank_crops,
    recommend_fertilizer,
)
from cropadvisor.data import load_fertilizer_dataset, synth_fertilizer_rows, write_fertilizer_csv
from cropadvisor.domain import ValidationError
from cropadvisor.forecast import price_scores
from cropadvisor.models import fit_decision_tree

unit = st.floats(min_value=0.0, max_value=1.0)


class TestScoreWeights:
    def test_defaults(self):
        w = ScoreWeights()
        assert (w.w1, w.w2) == (0.6, 0.4)

    def test_must_sum_to_one(self):
        with pytest.raises(ValidationError, match="sum to 1"):
            ScoreWeights(0.7, 0.4)

    def test_non_negative(self):
        with pytest.raises(ValidationError):
            ScoreWeights(1.2, -0.2)

    def test_degenerate_pairs_allowed(self):
        assert ScoreWeights(1.0, 0.0).w2 == 0.0
        assert ScoreWeights(0.0, 1.0).w1 == 0.0


class TestCompositeScore:
    def test_rejected_crop_row(self):
        assert composite_score(0.98, 0.15) == pytest.approx(0.648, abs=1e-9)

    def test_optimal_crop_row(self):
        assert composite_score(0.85, 0.80) == pytest.approx(0.830, abs=1e-9)

    def test_unit_endpoint(self):
        assert composite_score(1.0, 1.0, ScoreWeights(0.3, 0.7)) == pytest.approx(1.0)

    def test_out_of_range_operands(self):
        with pytest.raises(ValidationError):
            composite_score(1.2, 0.5)
        with pytest.raises(ValidationError):
            composite_score(0.5, -0.1)

    @given(p=unit, g=unit, alpha=unit)
    def test_linearity_in_scaling(self, p, g, alpha):
        w = ScoreWeights()
        lhs = composite_score(alpha * p, alpha * g, w)
        rhs = alpha * composite_score(p, g, w)
        assert lhs == pytest.approx(rhs, abs=1e-12)

    @given(p=unit, g=unit, dp=unit)
    def test_monotone_in_p_yield(self, p, g, dp):
        w = ScoreWeights()
        higher = min(1.0, p + dp)
        assert composite_score(higher, g, w) >= composite_score(p, g, w) - 1e-12

    @given(p=unit, g1=unit, g2=unit)
    def test_strictly_monotone_in_price_when_w2_positive(self, p, g1, g2):
        w = ScoreWeights(0.6, 0.4)
        lo, hi = sorted((g1, g2))
        if hi - lo < 1e-9:
            return
        assert composite_score(p, hi, w) > composite_score(p, lo, w)


class TestRankCrops:
    def test_comparative_decision_fixture(self):
        advisory = rank_crops(
            {"Crop A": 0.98, "Crop B": 0.85},
            {"Crop A": 0.15, "Crop B": 0.80},
        )
        assert advisory.top.crop_id == "Crop B"
        assert advisory.top.score == pytest.approx(0.830, abs=1e-9)
        assert advisory.recommendations[1].crop_id == "Crop A"
        assert advisory.recommendations[1].score == pytest.approx(0.648, abs=1e-9)

    def test_pure_agronomic_weights_follow_posterior(self):
        posterior = {"a": 0.5, "b": 0.3, "c": 0.2}
        g = {"a": 0.0, "b": 1.0, "c": 0.9}
        advisory = rank_crops(posterior, g, ScoreWeights(1.0, 0.0))
        assert [r.crop_id for r in advisory.recommendations] == ["a", "b", "c"]

    def test_pure_price_weights_follow_prices(self):
        posterior = {"a": 0.5, "b": 0.3, "c": 0.2}
        g = {"a": 0.0, "b": 1.0, "c": 0.9}
        advisory = rank_crops(posterior, g, ScoreWeights(0.0, 1.0))
        assert [r.crop_id for r in advisory.recommendations] == ["b", "c", "a"]

    def test_uniform_everything_is_lexicographic(self):
        posterior = {c: 0.25 for c in ("delta", "alpha", "charlie", "bravo")}
        g = {c: 0.5 for c in posterior}
        advisory = rank_crops(posterior, g)
        assert [r.crop_id for r in advisory.recommendations] == [
            "alpha", "bravo", "charlie", "delta",
        ]

    def test_score_tie_breaks_by_p_yield(self):
        # same composite score, different mix -> higher p_yield first
        posterior = {"x": 0.8, "y": 0.4}
        g = {"x": 0.2, "y": 0.8}  # scores: 0.56 vs 0.56
        advisory = rank_crops(posterior, g)
        assert [r.crop_id for r in advisory.recommendations] == ["x", "y"]

    def test_missing_price_gets_neutral_and_flag(self):
        advisory = rank_crops({"a": 0.5, "b": 0.5}, {"a": 0.9})
        by_crop = {r.crop_id: r for r in advisory.recommendations}
        assert by_crop["b"].g_price == 0.5
        assert by_crop["b"].no_market_data
        assert not by_crop["a"].no_market_data

    def test_empty_catalog_errors(self):
        with pytest.raises(ValidationError):
            rank_crops({}, {})

    def test_price_shift_does_not_change_ranking(self):
        # end-to-end through min-max: adding a constant to all prices cancels
        posterior = {"a": 0.4, "b": 0.35, "c": 0.25}
        prices = {"a": 120.0, "b": 300.0, "c": 210.0}
        base = rank_crops(posterior, price_scores(prices))
        shifted = rank_crops(posterior, price_scores({c: p + 77.0 for c, p in prices.items()}))
        assert [r.crop_id for r in base.recommendations] == [
            r.crop_id for r in shifted.recommendations
        ]

    def test_posterior_to_mapping(self):
        mapping = posterior_to_mapping(np.array([0.2, 0.8]), ("a", "b"))
        assert mapping == {"a": 0.2, "b": 0.8}
        with pytest.raises(ValidationError):
            posterior_to_mapping(np.array([1.0]), ("a", "b"))


@pytest.fixture(scope="module")
def fertilizer_fixture(tmp_path_factory):
    path = tmp_path_factory.mktemp("fert") / "fertilizer.csv"
    write_fertilizer_csv(synth_fertilizer_rows(seed=5, n_rows=200), path)
    ds = load_fertilizer_dataset(path)
    model = fit_decision_tree(ds)
    return ds, model


class TestRecommendFertilizer:
    def test_training_row_replay(self, fertilizer_fixture):
        ds, model = fertilizer_fixture
        # replay row 0 through the raw-input path
        row = ds.x[0]
        soil = next(
            name.split("=", 1)[1]
            for name, v in zip(ds.schema.feature_names, row)
            if name.startswith("soil_type=") and v == 1.0
        )
        advice = recommend_fertilizer(
            model, ds.schema,
            n=row[0], p=row[1], k=row[2], soil_type=soil,
            moisture=row[3], temperature=row[4],
        )
        assert advice.fertilizer_type == ds.labels[0]

    def test_posterior_sums_to_one(self, fertilizer_fixture):
        ds, model = fertilizer_fixture
        advice = recommend_fertilizer(
            model, ds.schema, n=20, p=30, k=10, soil_type="Black",
            moisture=40, temperature=30,
        )
        assert sum(advice.posterior.values()) == pytest.approx(1.0, abs=1e-9)

    def test_unknown_soil_type_lists_categories(self, fertilizer_fixture):
        ds, model = fertilizer_fixture
        with pytest.raises(ValidationError) as exc:
            recommend_fertilizer(
                model, ds.schema, n=20, p=30, k=10, soil_type="Volcanic",
                moisture=40, temperature=30,
            )
        (field, message) = exc.value.field_errors[0]
        assert field == "soil_type"
        assert "Volcanic" in message
        assert "Black" in message  # known categories enumerated

    def test_encoding_shape(self, fertilizer_fixture):
        ds, _ = fertilizer_fixture
        v = encode_fertilizer_features(
            ds.schema, n=1, p=2, k=3, soil_type="Red", moisture=4, temperature=5
        )
        assert len(v) == ds.schema.arity
        assert sum(1 for x in v.values if x == 1.0 and x in (0.0, 1.0)) >= 1
