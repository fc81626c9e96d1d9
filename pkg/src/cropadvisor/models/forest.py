"""Bootstrap-aggregated Gini trees with out-of-bag scoring and impurity importances.

Tree i draws all of its randomness from a generator seeded with
``config.seed + i``, so forests are reproducible tree-by-tree and may be fit
in parallel without changing the result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..domain import FeatureVector, LabeledDataset
from .tree import TreeNode, grow_tree, tree_apply_class, tree_apply_proba, _as_matrix


@dataclass(frozen=True)
class ForestConfig:
    n_trees: int = 500
    features_per_split: str | int = "sqrt"  # "sqrt" | "all" | fixed k
    max_depth: int | None = None
    min_samples_leaf: int = 1
    bootstrap: bool = True
    seed: int = 42

    def __post_init__(self):
        if self.n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        if isinstance(self.features_per_split, str):
            if self.features_per_split not in ("sqrt", "all"):
                raise ValueError("features_per_split must be 'sqrt', 'all', or a fixed int")
        elif self.features_per_split < 1:
            raise ValueError("fixed features_per_split must be >= 1")
        if self.min_samples_leaf < 1:
            raise ValueError("min_samples_leaf must be >= 1")

    def resolve_features(self, arity: int) -> int:
        if self.features_per_split == "sqrt":
            return max(1, math.ceil(math.sqrt(arity)))
        if self.features_per_split == "all":
            return arity
        k = int(self.features_per_split)
        if k > arity:
            raise ValueError(f"fixed features_per_split {k} exceeds arity {arity}")
        return k


@dataclass(frozen=True)
class RandomForestModel:
    trees: tuple[TreeNode, ...]
    class_catalog: tuple[str, ...]
    feature_arity: int
    feature_names: tuple[str, ...]
    oob_masks: np.ndarray = field(repr=False)  # (n_trees, n_train) bool
    config: ForestConfig = field(default_factory=ForestConfig)

    kind = "random_forest"

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        """Mean of per-tree leaf class-frequency vectors."""
        x = _as_matrix(x, self.feature_arity)
        n_classes = len(self.class_catalog)
        out = np.zeros((x.shape[0], n_classes))
        for root in self.trees:
            tree_apply_proba(root, x, n_classes, out)
        out /= len(self.trees)
        return out

    def predict(self, x: np.ndarray) -> list[str]:
        proba = self.predict_proba(x)
        return [self.class_catalog[i] for i in np.argmax(proba, axis=1)]

    def predict_vector(self, v: FeatureVector) -> np.ndarray:
        return self.predict_proba(v.as_array()[None, :])[0]


def _fit_one_tree(
    x: np.ndarray,
    y: np.ndarray,
    n_classes: int,
    config: ForestConfig,
    features_per_split: int,
    tree_index: int,
) -> tuple[TreeNode, np.ndarray]:
    rng = np.random.default_rng(config.seed + tree_index)
    n = x.shape[0]
    if config.bootstrap:
        idx = rng.integers(0, n, size=n)
        oob = np.ones(n, dtype=bool)
        oob[idx] = False
    else:
        idx = np.arange(n)
        oob = np.zeros(n, dtype=bool)
    root = grow_tree(
        x[idx],
        y[idx],
        n_classes,
        max_depth=config.max_depth,
        min_samples_leaf=config.min_samples_leaf,
        rng=rng,
        features_per_split=features_per_split,
    )
    return root, oob


def fit_random_forest(
    train: LabeledDataset, config: ForestConfig | None = None, n_jobs: int = 1
) -> RandomForestModel:
    """Fit the ensemble; `n_jobs` != 1 fans trees out over processes (same result)."""
    if train.n_rows == 0:
        raise ValueError("cannot fit a forest on an empty dataset")
    cfg = config or ForestConfig()
    m = cfg.resolve_features(train.arity)
    x, y = train.x, train.label_codes
    n_classes = len(train.class_catalog)
    if n_jobs == 1 or cfg.n_trees == 1:
        fitted = [_fit_one_tree(x, y, n_classes, cfg, m, i) for i in range(cfg.n_trees)]
    else:
        from joblib import Parallel, delayed

        fitted = Parallel(n_jobs=n_jobs)(
            delayed(_fit_one_tree)(x, y, n_classes, cfg, m, i) for i in range(cfg.n_trees)
        )
    trees = tuple(root for root, _ in fitted)
    oob_masks = np.asarray([oob for _, oob in fitted], dtype=bool)
    return RandomForestModel(
        trees=trees,
        class_catalog=train.class_catalog,
        feature_arity=train.arity,
        feature_names=train.schema.feature_names,
        oob_masks=oob_masks,
        config=cfg,
    )


def oob_votes(model: RandomForestModel, train: LabeledDataset) -> np.ndarray:
    """Per-row class votes cast only by trees for which the row was out-of-bag."""
    if not model.config.bootstrap:
        raise ValueError("OOB undefined: forest was fit with bootstrap off")
    if model.oob_masks.shape[1] != train.n_rows:
        raise ValueError("training dataset does not match the forest's OOB masks")
    n_classes = len(model.class_catalog)
    votes = np.zeros((train.n_rows, n_classes), dtype=np.int64)
    for root, mask in zip(model.trees, model.oob_masks):
        idx = np.nonzero(mask)[0]
        if idx.size == 0:
            continue
        pred = np.empty(idx.size, dtype=np.intp)
        tree_apply_class(root, train.x[idx], pred)
        np.add.at(votes, (idx, pred), 1)
    return votes


def oob_details(model: RandomForestModel, train: LabeledDataset) -> dict:
    """OOB accuracy plus how many rows were scoreable vs never out-of-bag."""
    votes = oob_votes(model, train)
    scoreable = votes.sum(axis=1) > 0
    n_excluded = int((~scoreable).sum())
    if not scoreable.any():
        return {"accuracy": 0.0, "n_scored": 0, "n_excluded": n_excluded}
    pred = np.argmax(votes[scoreable], axis=1)
    truth = train.label_codes[scoreable]
    return {
        "accuracy": float((pred == truth).mean()),
        "n_scored": int(scoreable.sum()),
        "n_excluded": n_excluded,
    }


def oob_accuracy(model: RandomForestModel, train: LabeledDataset) -> float:
    """Majority-vote accuracy over rows that were out-of-bag for >= 1 tree."""
    return oob_details(model, train)["accuracy"]


def feature_importances(model: RandomForestModel) -> np.ndarray:
    """Mean decrease in impurity per feature, normalized to sum to 1.

    Every split contributes its impurity decrease weighted by the fraction of
    that tree's samples reaching the node. A forest with no splits at all
    falls back to a uniform vector.
    """
    imp = np.zeros(model.feature_arity)

    def walk(node: TreeNode, n_root: int) -> None:
        if node.is_leaf:
            return
        imp[node.feature] += (node.n_samples / n_root) * node.decrease
        walk(node.left, n_root)
        walk(node.right, n_root)

    for root in model.trees:
        walk(root, root.n_samples)
    total = imp.sum()
    if total <= 0:
        return np.full(model.feature_arity, 1.0 / model.feature_arity)
    return imp / total
