import json

import pytest

from cropadvisor.bundle import load_bundle, save_bundle
from cropadvisor.cli import main
from cropadvisor.fixtures import comparative_fixture_bundle


@pytest.fixture(scope="module")
def data_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("data")
    code = main(["synth-data", "--out-dir", str(out), "--seed", "3",
                 "--rows-per-class", "6"])
    assert code == 0
    return out


@pytest.fixture(scope="module")
def trained_bundle_path(tmp_path_factory, data_dir):
    out = tmp_path_factory.mktemp("bundle") / "model.kisan.json"
    code = main([
        "train",
        "--crop-data", str(data_dir / "crop_recommendation.csv"),
        "--fertilizer-data", str(data_dir / "fertilizer.csv"),
        "--market-data", str(data_dir / "market_history.csv"),
        "--out", str(out),
        "--trees", "10",
        "--seed", "1",
    ])
    assert code == 0
    return out


@pytest.fixture(scope="module")
def fixture_bundle_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("fixture") / "fixture.kisan.json"
    save_bundle(comparative_fixture_bundle(), path)
    return path


class TestSynthData:
    def test_writes_all_four_files(self, data_dir):
        names = {p.name for p in data_dir.iterdir()}
        assert names == {
            "crop_recommendation.csv",
            "crop_with_price.csv",
            "fertilizer.csv",
            "market_history.csv",
        }


class TestTrain:
    def test_bundle_is_loadable(self, trained_bundle_path):
        bundle = load_bundle(trained_bundle_path)
        assert len(bundle.crop_catalog) == 22
        assert len(bundle.price_models) == 11
        assert bundle.forest.config.n_trees == 10

    def test_missing_file_exits_2(self, tmp_path, data_dir):
        code = main([
            "train",
            "--crop-data", str(tmp_path / "missing.csv"),
            "--fertilizer-data", str(data_dir / "fertilizer.csv"),
            "--market-data", str(data_dir / "market_history.csv"),
            "--out", str(tmp_path / "b.kisan.json"),
        ])
        assert code == 2


class TestRecommend:
    def test_fixture_top_line(self, fixture_bundle_path, capsys):
        code = main([
            "recommend", "--bundle", str(fixture_bundle_path),
            "--n", "90", "--p", "42", "--k", "43", "--temperature", "20.8",
            "--humidity", "82", "--ph", "6.5", "--rainfall", "202.9",
        ])
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0].startswith("Crop B 0.830")
        assert len(lines) == 4

    def test_invalid_ph_exits_2(self, fixture_bundle_path, capsys):
        code = main([
            "recommend", "--bundle", str(fixture_bundle_path),
            "--n", "90", "--p", "42", "--k", "43", "--temperature", "20.8",
            "--humidity", "82", "--ph", "20", "--rainfall", "202.9",
        ])
        assert code == 2
        assert "ph out of [0,14]" in capsys.readouterr().err

    def test_weight_pair_enforced(self, fixture_bundle_path, capsys):
        code = main([
            "recommend", "--bundle", str(fixture_bundle_path),
            "--n", "1", "--p", "1", "--k", "1", "--temperature", "20",
            "--humidity", "50", "--ph", "7", "--rainfall", "100",
            "--w1", "0.7",
        ])
        assert code == 1

    def test_custom_weights_change_ranking(self, fixture_bundle_path, capsys):
        code = main([
            "recommend", "--bundle", str(fixture_bundle_path),
            "--n", "1", "--p", "1", "--k", "1", "--temperature", "20",
            "--humidity", "50", "--ph", "7", "--rainfall", "100",
            "--w1", "0", "--w2", "1",
        ])
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0].startswith("Crop D 1.000")


class TestForecast:
    def test_prints_six_rows(self, fixture_bundle_path, capsys):
        code = main(["forecast", "Crop B", "--bundle", str(fixture_bundle_path)])
        assert code == 0
        out = capsys.readouterr().out.strip().splitlines()
        assert len(out) == 7  # header + 6 points

    def test_zero_months_usage_error(self, fixture_bundle_path, capsys):
        code = main([
            "forecast", "Crop B", "--bundle", str(fixture_bundle_path),
            "--months", "0",
        ])
        assert code == 1

    def test_unknown_crop_exits_2(self, fixture_bundle_path, capsys):
        code = main(["forecast", "durian", "--bundle", str(fixture_bundle_path)])
        assert code == 2
        assert "no market data" in capsys.readouterr().err

    def test_csv_export(self, fixture_bundle_path, tmp_path, capsys):
        out_csv = tmp_path / "fc.csv"
        code = main([
            "forecast", "Crop B", "--bundle", str(fixture_bundle_path),
            "--months", "3", "--csv", str(out_csv),
        ])
        assert code == 0
        lines = out_csv.read_text().strip().splitlines()
        assert lines[0] == "year,month,yhat,trend,seasonal,lower,upper"
        assert len(lines) == 4


class TestBenchmarkCommand:
    def test_writes_reports_and_is_deterministic(self, data_dir, tmp_path, capsys):
        args = [
            "benchmark",
            "--data", str(data_dir / "crop_with_price.csv"),
            "--fraction", "0.25",
            "--seed", "42",
            "--trees", "8",
        ]
        out_a = tmp_path / "a"
        out_b = tmp_path / "b"
        out_a.mkdir()
        out_b.mkdir()
        for out in (out_a, out_b):
            code = main(args + [
                "--out-json", str(out / "report.json"),
                "--out-text", str(out / "report.txt"),
                "--out-confusion", str(out / "confusion.csv"),
            ])
            assert code == 0
        body_a = json.loads((out_a / "report.json").read_text())["report"]
        body_b = json.loads((out_b / "report.json").read_text())["report"]
        assert json.dumps(body_a, sort_keys=True) == json.dumps(body_b, sort_keys=True)
        assert (out_a / "report.txt").read_bytes() == (out_b / "report.txt").read_bytes()
        assert (out_a / "confusion.csv").read_bytes() == (out_b / "confusion.csv").read_bytes()
        table = (out_a / "report.txt").read_text()
        assert "random forest" in table and "gbt (in-house)" in table

    def test_missing_data_exits_2(self, tmp_path):
        code = main(["benchmark", "--data", str(tmp_path / "nope.csv")])
        assert code == 2


class TestUsageErrors:
    def test_unknown_command(self, capsys):
        assert main(["frobnicate"]) == 1

    def test_unknown_flag(self, capsys):
        assert main(["forecast", "rice", "--bundle", "x", "--warp", "9"]) == 1

    def test_serve_without_bundle(self, monkeypatch, capsys):
        monkeypatch.delenv("CROPADVISOR_BUNDLE", raising=False)
        assert main(["serve"]) == 2

    def test_serve_bad_bind(self, fixture_bundle_path, monkeypatch):
        monkeypatch.setenv("CROPADVISOR_BUNDLE", str(fixture_bundle_path))
        assert main(["serve", "--bind", "nonsense"]) == 1
