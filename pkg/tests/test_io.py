import json

import numpy as np
import pytest

from cropadvisor.bundle import (
    BundleError,
    load_bundle,
    save_bundle,
)
from cropadvisor.data import (
    CROP_HEADER,
    DataError,
    dataset_fingerprint,
    load_crop_dataset,
    load_fertilizer_dataset,
    load_market_history,
    soil_categories_from_schema,
    synth_crop_corpus,
    synth_fertilizer_rows,
    synth_market_series,
    synth_market_table,
    write_crop_csv,
    write_fertilizer_csv,
    write_market_csv,
)
from cropadvisor.fixtures import comparative_fixture_bundle, synthetic_demo_bundle


def write_lines(path, lines):
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


class TestLoadCropDataset:
    def test_round_trip_via_writer(self, tmp_path):
        ds = synth_crop_corpus(seed=3, n_per_class=5)
        path = tmp_path / "crop.csv"
        write_crop_csv(ds, path)
        loaded = load_crop_dataset(path, with_price=True)
        assert loaded.n_rows == ds.n_rows
        assert loaded.class_catalog == ds.class_catalog
        assert np.array_equal(loaded.x, ds.x)

    def test_seven_feature_variant(self, tmp_path):
        ds = synth_crop_corpus(seed=3, n_per_class=3, with_price=False)
        path = tmp_path / "crop7.csv"
        write_crop_csv(ds, path)
        loaded = load_crop_dataset(path)
        assert loaded.arity == 7

    def test_missing_price_column_named(self, tmp_path):
        path = tmp_path / "crop.csv"
        write_lines(path, [",".join(CROP_HEADER), "1,2,3,4,5,6,7,rice"])
        with pytest.raises(DataError, match="market_price"):
            load_crop_dataset(path, with_price=True)

    def test_empty_cell_row_numbered(self, tmp_path):
        path = tmp_path / "crop.csv"
        write_lines(
            path,
            [",".join(CROP_HEADER), "1,2,3,4,5,6,7,rice", "1,,3,4,5,6,7,maize"],
        )
        with pytest.raises(DataError, match="row 3: empty field 'P'"):
            load_crop_dataset(path)

    def test_non_numeric_cell(self, tmp_path):
        path = tmp_path / "crop.csv"
        write_lines(path, [",".join(CROP_HEADER), "1,2,x,4,5,6,7,rice"])
        with pytest.raises(DataError, match="row 2: non-numeric value 'x' in 'K'"):
            load_crop_dataset(path)

    def test_wrong_arity_row(self, tmp_path):
        path = tmp_path / "crop.csv"
        write_lines(path, [",".join(CROP_HEADER), "1,2,3,rice"])
        with pytest.raises(DataError, match="row 2: expected 8 fields, got 4"):
            load_crop_dataset(path)

    def test_non_finite_value(self, tmp_path):
        path = tmp_path / "crop.csv"
        write_lines(path, [",".join(CROP_HEADER), "1,2,inf,4,5,6,7,rice"])
        with pytest.raises(DataError, match="non-finite"):
            load_crop_dataset(path)

    def test_unknown_column(self, tmp_path):
        path = tmp_path / "crop.csv"
        header = CROP_HEADER[:-1] + ["extra", "label"]
        write_lines(path, [",".join(header), "1,2,3,4,5,6,7,9,rice"])
        with pytest.raises(DataError, match="unexpected columns.*extra"):
            load_crop_dataset(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_crop_dataset(tmp_path / "nope.csv")


class TestLoadMarketHistory:
    def test_happy_path(self, tmp_path):
        table = synth_market_table(seed=1, crops=("rice", "maize"), n_months=30)
        path = tmp_path / "market.csv"
        write_market_csv(table, path)
        loaded = load_market_history(path)
        assert set(loaded) == {"rice", "maize"}
        assert len(loaded["rice"]) == 30
        got = [(p.year, p.month) for p in loaded["rice"].points]
        assert got == sorted(got)

    def test_duplicate_timestamp(self, tmp_path):
        path = tmp_path / "market.csv"
        write_lines(
            path,
            ["crop,month,year,price", "rice,5,2023,100", "rice,5,2023,101"],
        )
        with pytest.raises(DataError, match=r"duplicate timestamp \(rice, 2023, 5\)"):
            load_market_history(path)

    def test_month_13(self, tmp_path):
        path = tmp_path / "market.csv"
        write_lines(path, ["crop,month,year,price", "rice,13,2023,100"])
        with pytest.raises(DataError, match="month outside 1-12"):
            load_market_history(path)

    def test_non_positive_price(self, tmp_path):
        path = tmp_path / "market.csv"
        write_lines(path, ["crop,month,year,price", "rice,5,2023,0"])
        with pytest.raises(DataError, match="non-positive price"):
            load_market_history(path)

    def test_unsorted_input_is_sorted(self, tmp_path):
        path = tmp_path / "market.csv"
        write_lines(
            path,
            ["crop,month,year,price", "rice,5,2023,100", "rice,1,2023,90", "rice,12,2022,80"],
        )
        loaded = load_market_history(path)
        got = [(p.year, p.month) for p in loaded["rice"].points]
        assert got == [(2022, 12), (2023, 1), (2023, 5)]


class TestLoadFertilizer:
    def test_round_trip(self, tmp_path):
        rows = synth_fertilizer_rows(seed=4, n_rows=60)
        path = tmp_path / "fert.csv"
        write_fertilizer_csv(rows, path)
        ds = load_fertilizer_dataset(path)
        assert ds.n_rows == 60
        cats = soil_categories_from_schema(ds.schema)
        assert ds.arity == 5 + len(cats)
        assert list(cats) == sorted(cats)

    def test_one_hot_rows_sum_to_one(self, tmp_path):
        rows = synth_fertilizer_rows(seed=4, n_rows=30)
        path = tmp_path / "fert.csv"
        write_fertilizer_csv(rows, path)
        ds = load_fertilizer_dataset(path)
        onehot_cols = [
            j for j, name in enumerate(ds.schema.feature_names)
            if name.startswith("soil_type=")
        ]
        assert np.all(ds.x[:, onehot_cols].sum(axis=1) == 1.0)

    def test_five_categories_arity_ten(self, tmp_path):
        rows = [
            (1, 2, 3, soil, 4, 5, "Urea")
            for soil in ("Black", "Clayey", "Loamy", "Red", "Sandy")
        ] * 2
        path = tmp_path / "fert.csv"
        write_fertilizer_csv(rows, path)
        ds = load_fertilizer_dataset(path)
        assert ds.arity == 10

    def test_extra_label_accepted(self, tmp_path):
        rows = synth_fertilizer_rows(seed=4, n_rows=20) + [(1, 2, 3, "Black", 4, 5, "NewMix")]
        path = tmp_path / "fert.csv"
        write_fertilizer_csv(rows, path)
        ds = load_fertilizer_dataset(path)
        assert "NewMix" in ds.class_catalog


class TestSynthGenerators:
    def test_market_series_exact_line(self):
        series = synth_market_series(0, base=10, slope=2, amplitude=0, noise_sigma=0, n_months=5)
        assert [p.price for p in series.points] == [10, 12, 14, 16, 18]

    def test_market_series_deterministic(self):
        a = synth_market_series(9, n_months=24)
        b = synth_market_series(9, n_months=24)
        assert a == b

    def test_seasonal_gap(self):
        # amplitude 10: March mean minus September mean approaches 20
        series = synth_market_series(
            1, base=100, slope=0, amplitude=10, noise_sigma=0.5, n_months=120
        )
        by_month = {}
        for p in series.points:
            by_month.setdefault(p.month, []).append(p.price)
        gap = np.mean(by_month[3]) - np.mean(by_month[9])
        assert gap == pytest.approx(20.0, abs=1.0)

    def test_clamps_and_warns(self):
        with pytest.warns(UserWarning, match="clamped"):
            series = synth_market_series(
                2, base=1.0, slope=-5.0, amplitude=0, noise_sigma=0, n_months=6
            )
        assert min(p.price for p in series.points) == 0.01

    def test_crop_corpus_shape(self):
        ds = synth_crop_corpus(seed=1, n_per_class=10)
        assert ds.n_rows == 220
        assert len(ds.class_catalog) == 22
        assert ds.arity == 8
        # humidity and ph stay inside their physical ranges
        assert ds.x[:, 4].min() >= 0 and ds.x[:, 4].max() <= 100
        assert ds.x[:, 5].min() >= 0 and ds.x[:, 5].max() <= 14


class TestFingerprint:
    def test_changes_iff_cell_changes(self):
        ds = synth_crop_corpus(seed=5, n_per_class=3)
        fp1 = dataset_fingerprint(ds)
        fp2 = dataset_fingerprint(ds)
        assert fp1 == fp2
        x = ds.x.copy()
        x[0, 0] += 1e-9
        from cropadvisor.domain import make_dataset

        altered = make_dataset(ds.schema, x, ds.labels, ds.class_catalog)
        assert dataset_fingerprint(altered)["sha256"] != fp1["sha256"]

    def test_counts(self):
        ds = synth_crop_corpus(seed=5, n_per_class=4)
        fp = dataset_fingerprint(ds)
        assert fp["rows"] == 88
        assert fp["classes"] == 22


class TestBundleRoundTrip:
    def test_predictions_bit_identical(self, tmp_path):
        bundle = synthetic_demo_bundle(seed=3, n_trees=8)
        path = tmp_path / f"demo{'.kisan.json'}"
        save_bundle(bundle, path)
        loaded = load_bundle(path)

        rng = np.random.default_rng(0)
        probes = rng.uniform(0, 150, size=(100, 7))
        assert np.array_equal(
            bundle.forest.predict_proba(probes), loaded.forest.predict_proba(probes)
        )
        fert_probe = rng.uniform(0, 50, size=(20, bundle.fertilizer_model.feature_arity))
        assert np.array_equal(
            bundle.fertilizer_model.predict_proba(fert_probe),
            loaded.fertilizer_model.predict_proba(fert_probe),
        )
        for crop, model in bundle.price_models.items():
            for year, month in [(2024, 1), (2025, 6)]:
                assert model.predict_at(year, month) == loaded.price_models[
                    crop
                ].predict_at(year, month)

    def test_unsupported_version(self, tmp_path):
        bundle = comparative_fixture_bundle()
        path = tmp_path / "b.kisan.json"
        save_bundle(bundle, path)
        doc = json.loads(path.read_text())
        doc["format_version"] = 999
        path.write_text(json.dumps(doc))
        with pytest.raises(BundleError, match="unsupported bundle format version: 999"):
            load_bundle(path)

    def test_truncated_file(self, tmp_path):
        bundle = comparative_fixture_bundle()
        path = tmp_path / "b.kisan.json"
        save_bundle(bundle, path)
        raw = path.read_text()
        path.write_text(raw[: len(raw) // 2])
        with pytest.raises(BundleError, match="corrupted bundle"):
            load_bundle(path)

    def test_checksum_mismatch(self, tmp_path):
        bundle = comparative_fixture_bundle()
        path = tmp_path / "b.kisan.json"
        save_bundle(bundle, path)
        doc = json.loads(path.read_text())
        doc["bundle"]["forest"]["trees"][0]["counts"][0] += 1
        path.write_text(json.dumps(doc))
        with pytest.raises(BundleError, match="checksum mismatch"):
            load_bundle(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(BundleError, match="not found"):
            load_bundle(tmp_path / "missing.kisan.json")

    def test_oob_masks_survive(self, tmp_path):
        bundle = synthetic_demo_bundle(seed=4, n_trees=5)
        path = tmp_path / "b.kisan.json"
        save_bundle(bundle, path)
        loaded = load_bundle(path)
        assert np.array_equal(bundle.forest.oob_masks, loaded.forest.oob_masks)


class TestComparativeFixture:
    def test_posterior_is_expected(self):
        bundle = comparative_fixture_bundle()
        proba = bundle.forest.predict_proba(np.zeros((1, 7)))[0]
        assert proba.tolist() == [0.10, 0.85, 0.03, 0.02]

    def test_price_models_are_exact_constants(self):
        bundle = comparative_fixture_bundle()
        assert bundle.price_models["Crop B"].predict_at(2024, 6) == 180.0
        assert bundle.price_models["Crop C"].predict_at(2030, 1) == 100.0

    def test_round_trips(self, tmp_path):
        bundle = comparative_fixture_bundle()
        path = tmp_path / "fixture.kisan.json"
        save_bundle(bundle, path)
        loaded = load_bundle(path)
        assert loaded.crop_catalog == bundle.crop_catalog
        assert np.array_equal(
            loaded.forest.predict_proba(np.zeros((1, 7))),
            bundle.forest.predict_proba(np.zeros((1, 7))),
        )
