import itertools

import numpy as np
import pytest

from cropadvisor.domain import FeatureSchema, make_dataset
from cropadvisor.models import (
    TreeConfig,
    best_split,
    fit_decision_tree,
    gini_impurity,
)
from cropadvisor.models.tree import count_nodes, tree_depth


class TestGiniImpurity:
    def test_pure_node(self):
        assert gini_impurity([10, 0]) == 0.0

    def test_even_two_class(self):
        assert gini_impurity([5, 5]) == 0.5

    def test_even_three_class(self):
        assert gini_impurity([4, 4, 4]) == pytest.approx(2.0 / 3.0)

    def test_all_zero_errors(self):
        with pytest.raises(ValueError):
            gini_impurity([0, 0])

    def test_negative_errors(self):
        with pytest.raises(ValueError):
            gini_impurity([3, -1])


def brute_force_best_split(rows, labels):
    """Independent oracle: enumerate every feature/midpoint pair directly."""
    x = np.asarray(rows, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    n = len(labels)
    catalog = sorted(set(labels))

    def gini(labs):
        if not labs:
            return 0.0
        return 1.0 - sum((labs.count(c) / len(labs)) ** 2 for c in catalog)

    parent = gini(list(labels))
    best = None
    for f in range(x.shape[1]):
        values = sorted(set(x[:, f]))
        for a, b in zip(values, values[1:]):
            thr = (a + b) / 2.0
            left = [labels[i] for i in range(n) if x[i, f] <= thr]
            right = [labels[i] for i in range(n) if x[i, f] > thr]
            dec = parent - (len(left) * gini(left) + len(right) * gini(right)) / n
            if dec > 1e-12 and (best is None or dec > best[2] + 1e-15):
                best = (f, thr, dec)
    return best


class TestBestSplit:
    def test_hand_enumerated_1d(self):
        # midpoints 1.5, 5.5, 9.5; 5.5 separates the classes perfectly
        got = best_split([[1.0], [2.0], [9.0], [10.0]], ["A", "A", "B", "B"])
        assert got is not None
        assert got.feature == 0
        assert got.threshold == 5.5
        assert got.decrease == pytest.approx(0.5, abs=1e-12)

    def test_matches_brute_force_oracle(self):
        rng = np.random.default_rng(5)
        for trial in range(25):
            n = int(rng.integers(2, 16))
            d = int(rng.integers(1, 4))
            x = rng.integers(0, 5, size=(n, d)).astype(float)
            labels = [("A", "B", "C")[i] for i in rng.integers(0, 3, size=n)]
            expected = brute_force_best_split(x, labels)
            got = best_split(x, labels)
            if expected is None:
                assert got is None
            else:
                assert got is not None
                assert (got.feature, got.threshold) == (expected[0], expected[1])
                assert got.decrease == pytest.approx(expected[2], abs=1e-9)

    def test_all_same_label_gives_none(self):
        assert best_split([[1.0], [2.0], [3.0]], ["A", "A", "A"]) is None

    def test_identical_rows_different_labels_gives_none(self):
        assert best_split([[1.0, 2.0], [1.0, 2.0]], ["A", "B"]) is None

    def test_tie_breaks_to_lower_feature(self):
        # both features separate perfectly; feature 0 must win
        x = [[0.0, 0.0], [0.0, 0.0], [1.0, 1.0], [1.0, 1.0]]
        got = best_split(x, ["A", "A", "B", "B"])
        assert got.feature == 0

    def test_candidate_feature_restriction(self):
        x = [[0.0, 0.0], [0.0, 0.0], [1.0, 1.0], [1.0, 1.0]]
        got = best_split(x, ["A", "A", "B", "B"], candidate_features=[1])
        assert got.feature == 1


class TestFitDecisionTree:
    def test_linearly_separable_depth_one(self):
        ds = make_dataset(
            FeatureSchema("t1", ("a",)),
            [[0.0], [1.0], [10.0], [11.0]],
            ["lo", "lo", "hi", "hi"],
        )
        model = fit_decision_tree(ds)
        assert tree_depth(model.root) == 1
        assert model.predict(ds.x) == list(ds.labels)

    def test_pure_data_single_leaf(self):
        ds = make_dataset(FeatureSchema("t2", ("a",)), [[0.0], [5.0]], ["one", "one"])
        model = fit_decision_tree(ds)
        assert model.root.is_leaf

    def test_xor_memorized(self):
        pts = list(itertools.product([0.0, 1.0], repeat=2))
        labels = ["A" if a == b else "B" for a, b in pts]
        ds = make_dataset(FeatureSchema("xor", ("a", "b")), pts, labels)
        model = fit_decision_tree(ds)
        assert model.predict(ds.x) == labels

    def test_max_depth_zero_is_single_leaf(self):
        ds = make_dataset(
            FeatureSchema("t3", ("a",)), [[0.0], [1.0]], ["A", "B"]
        )
        model = fit_decision_tree(ds, TreeConfig(max_depth=0))
        assert model.root.is_leaf

    def test_min_samples_leaf_respected(self):
        rng = np.random.default_rng(2)
        x = rng.normal(size=(40, 2))
        labels = ["A" if v <= 0 else "B" for v in x[:, 0]]
        ds = make_dataset(FeatureSchema("t4", ("a", "b")), x, labels)
        model = fit_decision_tree(ds, TreeConfig(min_samples_leaf=5))

        def leaves(node):
            if node.is_leaf:
                yield node
            else:
                yield from leaves(node.left)
                yield from leaves(node.right)

        assert all(leaf.counts.sum() >= 5 for leaf in leaves(model.root))

    def test_empty_train_errors(self):
        ds = make_dataset(
            FeatureSchema("t5", ("a",)), np.empty((0, 1)), [], class_catalog=["A"]
        )
        with pytest.raises(ValueError):
            fit_decision_tree(ds)

    def test_gain_splits_positive_and_fallbacks_zero(self):
        rng = np.random.default_rng(3)
        x = rng.normal(size=(60, 3))
        labels = [("A", "B", "C")[i] for i in rng.integers(0, 3, size=60)]
        ds = make_dataset(FeatureSchema("t6", ("a", "b", "c")), x, labels)
        model = fit_decision_tree(ds)

        def internals(node):
            if not node.is_leaf:
                yield node
                yield from internals(node.left)
                yield from internals(node.right)

        splits = list(internals(model.root))
        assert splits
        # continuous random features: the chosen splits all carry real gain
        assert all(s.decrease > 0 for s in splits)

    def test_xor_root_split_is_zero_gain_fallback(self):
        pts = [[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]]
        labels = ["A", "A", "B", "B"]
        assert best_split(pts, labels) is None  # no strictly positive decrease
        ds = make_dataset(FeatureSchema("x2", ("a", "b")), pts, labels)
        model = fit_decision_tree(ds)
        assert not model.root.is_leaf
        assert model.root.decrease == 0.0

    def test_posterior_rows_sum_to_one(self):
        rng = np.random.default_rng(4)
        x = rng.normal(size=(30, 2))
        labels = [("A", "B")[i] for i in rng.integers(0, 2, size=30)]
        ds = make_dataset(FeatureSchema("t7", ("a", "b")), x, labels)
        model = fit_decision_tree(ds, TreeConfig(max_depth=2))
        proba = model.predict_proba(ds.x)
        assert np.all(proba >= 0)
        assert np.allclose(proba.sum(axis=1), 1.0, atol=1e-9)

    def test_node_count_is_finite_and_odd(self):
        ds = make_dataset(
            FeatureSchema("t8", ("a",)),
            [[0.0], [1.0], [10.0], [11.0]],
            ["lo", "lo", "hi", "hi"],
        )
        model = fit_decision_tree(ds)
        assert count_nodes(model.root) % 2 == 1
