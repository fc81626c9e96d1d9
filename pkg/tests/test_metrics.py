import math

import numpy as np
import pytest

from cropadvisor.benchmark import ModelSpec, render_text_table, run_benchmark
from cropadvisor.domain import FeatureSchema, make_dataset
from cropadvisor.metrics import (
    classification_metrics,
    confusion_matrix,
    log_loss,
)


class TestConfusionMatrix:
    def test_perfect_diagonal(self):
        cm = confusion_matrix(["A", "B", "A"], ["A", "B", "A"], ["A", "B"])
        assert cm.counts.tolist() == [[2, 0], [0, 1]]

    def test_hand_enumeration(self):
        cm = confusion_matrix(["A", "A", "B"], ["A", "B", "B"], ["A", "B"])
        assert cm.counts.tolist() == [[1, 1], [0, 1]]

    def test_empty_inputs_zero_matrix(self):
        cm = confusion_matrix([], [], ["A", "B"])
        assert cm.counts.tolist() == [[0, 0], [0, 0]]
        assert cm.total == 0

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="length mismatch"):
            confusion_matrix(["A"], ["A", "B"], ["A", "B"])

    def test_unknown_label(self):
        with pytest.raises(ValueError, match="unknown"):
            confusion_matrix(["Z"], ["A"], ["A", "B"])

    def test_csv_export(self):
        cm = confusion_matrix(["A", "B"], ["A", "B"], ["A", "B"])
        csv = cm.to_csv()
        assert csv.splitlines()[0] == "true\\predicted,A,B"
        assert csv.splitlines()[1] == "A,1,0"


class TestClassificationMetrics:
    def test_perfect_predictions(self):
        cm = confusion_matrix(["A", "B"], ["A", "B"], ["A", "B"])
        m = classification_metrics(cm)
        assert m.accuracy == 1.0
        assert m.precision_macro == 1.0
        assert m.recall_macro == 1.0
        assert m.f1_macro == 1.0

    def test_hand_computed_two_class(self):
        # cm [[8,2],[3,7]]: accuracy 15/20; precision A=8/11, B=7/9; recall A=8/10, B=7/10
        cm_obj = confusion_matrix(
            ["A"] * 10 + ["B"] * 10,
            ["A"] * 8 + ["B"] * 2 + ["A"] * 3 + ["B"] * 7,
            ["A", "B"],
        )
        assert cm_obj.counts.tolist() == [[8, 2], [3, 7]]
        m = classification_metrics(cm_obj)
        assert m.accuracy == 0.75
        assert m.recall_macro == 0.75
        assert m.precision_macro == pytest.approx(0.5 * (8 / 11 + 7 / 9), abs=1e-12)

    def test_never_predicted_class_precision_zero(self):
        cm = confusion_matrix(["A", "B"], ["A", "A"], ["A", "B"])
        m = classification_metrics(cm)
        assert m.per_class["B"]["precision"] == 0.0
        assert m.per_class["B"]["recall"] == 0.0
        assert m.per_class["B"]["f1"] == 0.0

    def test_macro_f1_bounded_by_per_class(self):
        cm = confusion_matrix(
            ["A"] * 10 + ["B"] * 10,
            ["A"] * 8 + ["B"] * 2 + ["A"] * 3 + ["B"] * 7,
            ["A", "B"],
        )
        m = classification_metrics(cm)
        per = [v["f1"] for v in m.per_class.values()]
        assert min(per) <= m.f1_macro <= max(per)

    def test_f1_is_harmonic_mean(self):
        cm = confusion_matrix(
            ["A"] * 10 + ["B"] * 10,
            ["A"] * 8 + ["B"] * 2 + ["A"] * 3 + ["B"] * 7,
            ["A", "B"],
        )
        m = classification_metrics(cm)
        for cls in ("A", "B"):
            p = m.per_class[cls]["precision"]
            r = m.per_class[cls]["recall"]
            assert m.per_class[cls]["f1"] == pytest.approx(2 * p * r / (p + r), abs=1e-12)

    def test_trace_over_total_is_accuracy(self):
        rng = np.random.default_rng(0)
        truth = [("A", "B", "C")[i] for i in rng.integers(0, 3, size=60)]
        pred = [("A", "B", "C")[i] for i in rng.integers(0, 3, size=60)]
        cm = confusion_matrix(truth, pred, ["A", "B", "C"])
        m = classification_metrics(cm)
        assert m.accuracy == np.trace(cm.counts) / cm.total

    def test_empty_matrix_errors(self):
        cm = confusion_matrix([], [], ["A"])
        with pytest.raises(ValueError):
            classification_metrics(cm)


class TestLogLoss:
    def test_perfect_one_hot_is_zero(self):
        posteriors = np.array([[1.0, 0.0], [0.0, 1.0]])
        assert log_loss(["A", "B"], posteriors, ["A", "B"]) == 0.0

    def test_uniform_over_22_classes(self):
        catalog = [f"c{i:02d}" for i in range(22)]
        posteriors = np.full((5, 22), 1.0 / 22.0)
        got = log_loss([catalog[0]] * 5, posteriors, catalog)
        assert got == pytest.approx(math.log(22), abs=1e-9)

    def test_zero_probability_clipped(self):
        posteriors = np.array([[0.0, 1.0]])
        got = log_loss(["A"], posteriors, ["A", "B"])
        assert got == pytest.approx(-math.log(1e-15), rel=1e-9)
        assert got == pytest.approx(34.538776394910684)

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="length mismatch"):
            log_loss(["A"], np.array([[0.5, 0.5], [0.5, 0.5]]), ["A", "B"])

    def test_rejects_unnormalized_rows(self):
        with pytest.raises(ValueError, match="sum to 1"):
            log_loss(["A"], np.array([[0.7, 0.7]]), ["A", "B"])

    def test_nonnegative_always(self):
        rng = np.random.default_rng(1)
        raw = rng.uniform(0.01, 1, size=(50, 4))
        posteriors = raw / raw.sum(axis=1, keepdims=True)
        catalog = ["a", "b", "c", "d"]
        truth = [catalog[i] for i in rng.integers(0, 4, size=50)]
        assert log_loss(truth, posteriors, catalog) >= 0.0


def small_corpus(seed=0, n_classes=4, per_class=12):
    rng = np.random.default_rng(seed)
    rows, labels = [], []
    for c in range(n_classes):
        center = rng.uniform(0, 10, size=3)
        rows.append(center + rng.normal(0, 0.4, size=(per_class, 3)))
        labels += [f"crop_{c}"] * per_class
    return make_dataset(
        FeatureSchema("bench3", ("a", "b", "c")), np.vstack(rows), labels
    )


class TestRunBenchmark:
    def test_single_forest_roster(self):
        ds = small_corpus()
        roster = [ModelSpec("forest", "random_forest", {"n_trees": 15, "seed": 1})]
        report = run_benchmark(ds, roster, split=(0.25, 42))
        assert len(report.rows) == 1
        assert report.rows[0].status == "ok"
        assert report.champion_name == "forest"
        assert report.rows[0].metrics.accuracy >= 0.9
        assert report.champion_importances is not None

    def test_failing_spec_is_isolated(self):
        ds = small_corpus()
        roster = [
            ModelSpec("bad", "no_such_kind"),
            ModelSpec("nb", "gaussian_nb"),
        ]
        report = run_benchmark(ds, roster, split=(0.25, 1))
        by_name = {r.name: r for r in report.rows}
        assert by_name["bad"].status == "failed"
        assert "unknown baseline kind" in by_name["bad"].error
        assert by_name["nb"].status == "ok"
        assert report.champion_name == "nb"

    def test_deterministic_body(self):
        ds = small_corpus()
        roster = [
            ModelSpec("forest", "random_forest", {"n_trees": 10, "seed": 3}),
            ModelSpec("nb", "gaussian_nb"),
            ModelSpec("knn", "knn", {"k": 3}),
        ]
        a = run_benchmark(ds, roster, split=(0.25, 7))
        b = run_benchmark(ds, roster, split=(0.25, 7))
        assert a.body_json() == b.body_json()

    def test_rows_sorted_by_accuracy_then_log_loss(self):
        ds = small_corpus(per_class=16)
        roster = [
            ModelSpec("nb", "gaussian_nb"),
            ModelSpec("knn", "knn", {"k": 3}),
            ModelSpec("tree", "single_tree"),
        ]
        report = run_benchmark(ds, roster, split=(0.25, 2))
        ok = [r for r in report.rows if r.status == "ok"]
        keys = [(-r.metrics.accuracy, r.metrics.log_loss, r.name) for r in ok]
        assert keys == sorted(keys)

    def test_oob_row_reuses_forest(self):
        ds = small_corpus(per_class=16)
        params = {"n_trees": 12, "seed": 5}
        roster = [
            ModelSpec("forest", "random_forest", params),
            ModelSpec("forest (oob)", "random_forest_oob", params),
        ]
        report = run_benchmark(ds, roster, split=(0.25, 3))
        oob_row = report.row("forest (oob)")
        assert oob_row.status == "ok"
        assert any("out-of-bag" in n for n in oob_row.notes)

    def test_empty_roster_errors(self):
        with pytest.raises(ValueError):
            run_benchmark(small_corpus(), roster=[])

    def test_text_table_mentions_all_models(self):
        ds = small_corpus()
        roster = [ModelSpec("nb", "gaussian_nb"), ModelSpec("bad", "nope")]
        report = run_benchmark(ds, roster, split=(0.25, 1))
        text = render_text_table(report)
        assert "nb" in text and "bad" in text and "FAILED" in text
        assert "Accuracy" in text and "F1-Score" in text and "Log Loss" in text

    def test_json_meta_separated_from_body(self):
        ds = small_corpus()
        roster = [ModelSpec("nb", "gaussian_nb")]
        report = run_benchmark(ds, roster, split=(0.25, 1))
        import json

        doc = json.loads(report.to_json(created_at="T"))
        assert doc["meta"]["created_at"] == "T"
        assert "wall_clock_seconds" in doc["meta"]
        assert "wall_clock" not in json.dumps(doc["report"])
