"""Gini decision tree grown by exhaustive midpoint threshold search.

The split scan considers, per candidate feature, every midpoint between
consecutive distinct sorted values and keeps the pair with the largest
weighted impurity decrease. Ties resolve to the lower feature index, then the
lower threshold, so a refit on identical data reproduces the same tree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from ..domain import FeatureVector, LabeledDataset

# Splits whose impurity decrease does not clear this are treated as zero-gain
# (guards against float noise manufacturing spurious splits).
_MIN_DECREASE = 1e-12


class TreeNode:
    """Internal split or leaf. Leaves own a per-class count vector."""

    __slots__ = ("feature", "threshold", "left", "right", "n_samples", "decrease", "counts")

    def __init__(
        self,
        *,
        feature: int = -1,
        threshold: float = 0.0,
        left: "TreeNode | None" = None,
        right: "TreeNode | None" = None,
        n_samples: int = 0,
        decrease: float = 0.0,
        counts: np.ndarray | None = None,
    ):
        self.feature = feature
        self.threshold = threshold
        self.left = left
        self.right = right
        self.n_samples = n_samples
        self.decrease = decrease
        self.counts = counts

    @property
    def is_leaf(self) -> bool:
        return self.counts is not None


class BestSplit(NamedTuple):
    feature: int
    threshold: float
    decrease: float


@dataclass(frozen=True)
class TreeConfig:
    max_depth: int | None = None
    min_samples_leaf: int = 1

    def __post_init__(self):
        if self.max_depth is not None and self.max_depth < 0:
            raise ValueError("max_depth must be >= 0 or None")
        if self.min_samples_leaf < 1:
            raise ValueError("min_samples_leaf must be >= 1")


def gini_impurity(class_counts: Sequence[int] | np.ndarray) -> float:
    """1 - sum((c_i/n)^2) over per-class counts; 0 for a pure node."""
    counts = np.asarray(class_counts, dtype=np.float64)
    if counts.ndim != 1:
        raise ValueError("class_counts must be one-dimensional")
    if (counts < 0).any():
        raise ValueError("class counts must be >= 0")
    total = counts.sum()
    if total <= 0:
        raise ValueError("class counts must sum to a positive total")
    p = counts / total
    return float(1.0 - (p * p).sum())


def _best_split_coded(
    x: np.ndarray,
    y: np.ndarray,
    candidate_features: np.ndarray,
    n_classes: int,
    min_samples_leaf: int = 1,
) -> BestSplit | None:
    """Split scan over integer-coded labels. Returns None when no split gains."""
    n = y.shape[0]
    if n < 2:
        return None
    counts = np.bincount(y, minlength=n_classes).astype(np.float64)
    parent = 1.0 - ((counts / n) ** 2).sum()
    if parent <= 0.0:
        return None
    class_range = np.arange(n_classes)
    best: BestSplit | None = None
    for f in candidate_features:
        v = x[:, f]
        order = np.argsort(v, kind="stable")
        vs = v[order]
        boundary = np.nonzero(vs[1:] != vs[:-1])[0]
        if boundary.size == 0:
            continue
        if min_samples_leaf > 1:
            keep = (boundary + 1 >= min_samples_leaf) & (n - boundary - 1 >= min_samples_leaf)
            boundary = boundary[keep]
            if boundary.size == 0:
                continue
        onehot = y[order][:, None] == class_range[None, :]
        cum = np.cumsum(onehot, axis=0, dtype=np.float64)
        left = cum[boundary]
        nl = (boundary + 1).astype(np.float64)
        nr = n - nl
        right = counts[None, :] - left
        gini_l = 1.0 - (left * left).sum(axis=1) / (nl * nl)
        gini_r = 1.0 - (right * right).sum(axis=1) / (nr * nr)
        dec = parent - (nl * gini_l + nr * gini_r) / n
        i = int(np.argmax(dec))  # first max -> lowest threshold on ties
        d = float(dec[i])
        if d <= _MIN_DECREASE:
            continue
        if best is None or d > best.decrease:
            b = boundary[i]
            thr = float(vs[b]) / 2.0 + float(vs[b + 1]) / 2.0
            best = BestSplit(int(f), thr, d)
    return best


def best_split(
    rows: np.ndarray | Sequence[Sequence[float]],
    labels: Sequence[str],
    candidate_features: Sequence[int] | None = None,
) -> BestSplit | None:
    """Public split scan over string labels (encodes, then runs the fast path)."""
    x = np.asarray(rows, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    catalog = sorted(set(labels))
    index = {c: i for i, c in enumerate(catalog)}
    y = np.asarray([index[lab] for lab in labels], dtype=np.intp)
    if candidate_features is None:
        feats = np.arange(x.shape[1])
    else:
        feats = np.asarray(sorted(candidate_features), dtype=np.intp)
    return _best_split_coded(x, y, feats, len(catalog))


def _fallback_split(
    x: np.ndarray, candidate_features: np.ndarray, min_samples_leaf: int
) -> tuple[int, float] | None:
    """Deterministic zero-gain split for impure-but-separable nodes.

    Greedy Gini stalls on parity patterns (no single split has positive
    decrease even though the labels are distinguishable). Splitting anyway at
    the middle midpoint of the lowest separable candidate feature keeps the
    tree growing toward purity; such nodes carry decrease 0.
    """
    n = x.shape[0]
    for f in candidate_features:
        vs = np.sort(x[:, f])
        boundary = np.nonzero(vs[1:] != vs[:-1])[0]
        if min_samples_leaf > 1:
            keep = (boundary + 1 >= min_samples_leaf) & (n - boundary - 1 >= min_samples_leaf)
            boundary = boundary[keep]
        if boundary.size == 0:
            continue
        b = boundary[(boundary.size - 1) // 2]
        thr = float(vs[b]) / 2.0 + float(vs[b + 1]) / 2.0
        return int(f), thr
    return None


def grow_tree(
    x: np.ndarray,
    y: np.ndarray,
    n_classes: int,
    *,
    max_depth: int | None = None,
    min_samples_leaf: int = 1,
    rng: np.random.Generator | None = None,
    features_per_split: int | None = None,
) -> TreeNode:
    """Recursive greedy Gini growth; stops at purity, depth, or leaf-size floor.

    When `rng` and `features_per_split` are given, that many candidate features
    are re-drawn (without replacement) at every node.
    """
    n_features = x.shape[1]
    sample_features = (
        rng is not None
        and features_per_split is not None
        and features_per_split < n_features
    )

    def build(xi: np.ndarray, yi: np.ndarray, depth: int) -> TreeNode:
        counts = np.bincount(yi, minlength=n_classes)
        n = yi.shape[0]
        leaf = TreeNode(counts=counts, n_samples=n)
        if (counts > 0).sum() <= 1:
            return leaf
        if max_depth is not None and depth >= max_depth:
            return leaf
        if n < 2 * min_samples_leaf:
            return leaf
        if sample_features:
            feats = np.sort(rng.choice(n_features, size=features_per_split, replace=False))
        else:
            feats = np.arange(n_features)
        found = _best_split_coded(xi, yi, feats, n_classes, min_samples_leaf)
        if found is None:
            fallback = _fallback_split(xi, feats, min_samples_leaf)
            if fallback is None:
                return leaf
            found = BestSplit(fallback[0], fallback[1], 0.0)
        mask = xi[:, found.feature] <= found.threshold
        if mask.all() or not mask.any():  # midpoint collapsed onto a value
            return leaf
        left = build(xi[mask], yi[mask], depth + 1)
        right = build(xi[~mask], yi[~mask], depth + 1)
        return TreeNode(
            feature=found.feature,
            threshold=found.threshold,
            left=left,
            right=right,
            n_samples=n,
            decrease=found.decrease,
        )

    return build(x, y, 0)


def tree_apply_proba(root: TreeNode, x: np.ndarray, n_classes: int, out: np.ndarray) -> None:
    """Add each row's leaf class-frequency vector into `out` (shape (n, n_classes))."""
    stack: list[tuple[TreeNode, np.ndarray]] = [(root, np.arange(x.shape[0]))]
    while stack:
        node, idx = stack.pop()
        if node.counts is not None:
            total = node.counts.sum()
            out[idx] += node.counts / total
            continue
        mask = x[idx, node.feature] <= node.threshold
        left_idx = idx[mask]
        right_idx = idx[~mask]
        if left_idx.size:
            stack.append((node.left, left_idx))
        if right_idx.size:
            stack.append((node.right, right_idx))


def tree_apply_class(root: TreeNode, x: np.ndarray, out: np.ndarray) -> None:
    """Write each row's leaf-majority class index into `out` (ties -> lowest index)."""
    stack: list[tuple[TreeNode, np.ndarray]] = [(root, np.arange(x.shape[0]))]
    while stack:
        node, idx = stack.pop()
        if node.counts is not None:
            out[idx] = int(np.argmax(node.counts))
            continue
        mask = x[idx, node.feature] <= node.threshold
        left_idx = idx[mask]
        right_idx = idx[~mask]
        if left_idx.size:
            stack.append((node.left, left_idx))
        if right_idx.size:
            stack.append((node.right, right_idx))


@dataclass(frozen=True)
class DecisionTreeModel:
    """A fitted single tree with the catalog that orders its posterior."""

    root: TreeNode
    class_catalog: tuple[str, ...]
    feature_arity: int
    feature_names: tuple[str, ...]
    config: TreeConfig

    kind = "single_tree"

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        x = _as_matrix(x, self.feature_arity)
        out = np.zeros((x.shape[0], len(self.class_catalog)))
        tree_apply_proba(self.root, x, len(self.class_catalog), out)
        return out

    def predict(self, x: np.ndarray) -> list[str]:
        proba = self.predict_proba(x)
        return [self.class_catalog[i] for i in np.argmax(proba, axis=1)]

    def predict_vector(self, v: FeatureVector) -> np.ndarray:
        return self.predict_proba(v.as_array()[None, :])[0]


def _as_matrix(x: np.ndarray, arity: int) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[None, :]
    if x.shape[1] != arity:
        raise ValueError(f"arity mismatch: got {x.shape[1]} features, model has {arity}")
    return x


def fit_decision_tree(train: LabeledDataset, config: TreeConfig | None = None) -> DecisionTreeModel:
    if train.n_rows == 0:
        raise ValueError("cannot fit a tree on an empty dataset")
    cfg = config or TreeConfig()
    root = grow_tree(
        train.x,
        train.label_codes,
        len(train.class_catalog),
        max_depth=cfg.max_depth,
        min_samples_leaf=cfg.min_samples_leaf,
    )
    return DecisionTreeModel(
        root=root,
        class_catalog=train.class_catalog,
        feature_arity=train.arity,
        feature_names=train.schema.feature_names,
        config=cfg,
    )


def tree_depth(root: TreeNode) -> int:
    if root.is_leaf:
        return 0
    return 1 + max(tree_depth(root.left), tree_depth(root.right))


def count_nodes(root: TreeNode) -> int:
    if root.is_leaf:
        return 1
    return 1 + count_nodes(root.left) + count_nodes(root.right)
