"""Gradient-boosted regression trees for multiclass classification.

One-vs-rest staging: every boosting round fits one least-squares regression
tree per class to the residual between the one-hot target and the current
softmax probability, then adds learning_rate times its prediction to that
class's score column. Probabilities are the softmax of the staged scores.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..domain import LabeledDataset

_MIN_SSE_DECREASE = 1e-12


class RegNode:
    __slots__ = ("feature", "threshold", "left", "right", "value")

    def __init__(
        self,
        *,
        feature: int = -1,
        threshold: float = 0.0,
        left: "RegNode | None" = None,
        right: "RegNode | None" = None,
        value: float = 0.0,
    ):
        self.feature = feature
        self.threshold = threshold
        self.left = left
        self.right = right
        self.value = value

    @property
    def is_leaf(self) -> bool:
        return self.left is None


def _best_reg_split(x: np.ndarray, g: np.ndarray) -> tuple[int, float, float] | None:
    """(feature, threshold, sse_decrease) maximizing SSE reduction, or None."""
    n = g.shape[0]
    if n < 2:
        return None
    total_sum = g.sum()
    total_sumsq = (g * g).sum()
    sse_total = total_sumsq - total_sum * total_sum / n
    best: tuple[int, float, float] | None = None
    for f in range(x.shape[1]):
        v = x[:, f]
        order = np.argsort(v, kind="stable")
        vs = v[order]
        boundary = np.nonzero(vs[1:] != vs[:-1])[0]
        if boundary.size == 0:
            continue
        gs = g[order]
        cs = np.cumsum(gs)
        css = np.cumsum(gs * gs)
        nl = (boundary + 1).astype(np.float64)
        nr = n - nl
        sum_l = cs[boundary]
        sumsq_l = css[boundary]
        sse_l = sumsq_l - sum_l * sum_l / nl
        sum_r = total_sum - sum_l
        sse_r = (total_sumsq - sumsq_l) - sum_r * sum_r / nr
        dec = sse_total - sse_l - sse_r
        i = int(np.argmax(dec))
        d = float(dec[i])
        if d <= _MIN_SSE_DECREASE:
            continue
        if best is None or d > best[2]:
            b = boundary[i]
            thr = float(vs[b]) / 2.0 + float(vs[b + 1]) / 2.0
            best = (f, thr, d)
    return best


def grow_regression_tree(x: np.ndarray, g: np.ndarray, max_depth: int) -> RegNode:
    def build(xi: np.ndarray, gi: np.ndarray, depth: int) -> RegNode:
        if depth >= max_depth or gi.shape[0] < 2:
            return RegNode(value=float(gi.mean()))
        found = _best_reg_split(xi, gi)
        if found is None:
            return RegNode(value=float(gi.mean()))
        f, thr, _ = found
        mask = xi[:, f] <= thr
        if mask.all() or not mask.any():
            return RegNode(value=float(gi.mean()))
        return RegNode(
            feature=f,
            threshold=thr,
            left=build(xi[mask], gi[mask], depth + 1),
            right=build(xi[~mask], gi[~mask], depth + 1),
        )

    return build(x, g, 0)


def reg_tree_apply(root: RegNode, x: np.ndarray, out: np.ndarray) -> None:
    stack: list[tuple[RegNode, np.ndarray]] = [(root, np.arange(x.shape[0]))]
    while stack:
        node, idx = stack.pop()
        if node.is_leaf:
            out[idx] = node.value
            continue
        mask = x[idx, node.feature] <= node.threshold
        left_idx = idx[mask]
        right_idx = idx[~mask]
        if left_idx.size:
            stack.append((node.left, left_idx))
        if right_idx.size:
            stack.append((node.right, right_idx))


@dataclass(frozen=True)
class GradientBoostedTreesModel:
    class_catalog: tuple[str, ...]
    feature_arity: int
    stages: tuple[tuple[RegNode, ...], ...]  # stages[m][c]
    learning_rate: float

    kind = "gradient_boosted_trees"

    def decision_scores(self, x: np.ndarray) -> np.ndarray:
        from .tree import _as_matrix

        x = _as_matrix(x, self.feature_arity)
        n_classes = len(self.class_catalog)
        scores = np.zeros((x.shape[0], n_classes))
        buf = np.empty(x.shape[0])
        for stage in self.stages:
            for c, tree in enumerate(stage):
                reg_tree_apply(tree, x, buf)
                scores[:, c] += self.learning_rate * buf
        return scores

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        scores = self.decision_scores(x)
        scores -= scores.max(axis=1, keepdims=True)
        e = np.exp(scores)
        return e / e.sum(axis=1, keepdims=True)

    def predict(self, x: np.ndarray) -> list[str]:
        proba = self.predict_proba(x)
        return [self.class_catalog[i] for i in np.argmax(proba, axis=1)]


def fit_gradient_boosted_trees(
    train: LabeledDataset,
    n_stages: int = 100,
    max_depth: int = 3,
    learning_rate: float = 0.1,
) -> GradientBoostedTreesModel:
    if n_stages < 1:
        raise ValueError("n_stages must be >= 1")
    n, d = train.x.shape
    n_classes = len(train.class_catalog)
    onehot = np.zeros((n, n_classes))
    onehot[np.arange(n), train.label_codes] = 1.0
    scores = np.zeros((n, n_classes))
    x = train.x
    stages: list[tuple[RegNode, ...]] = []
    buf = np.empty(n)
    for _ in range(n_stages):
        shifted = scores - scores.max(axis=1, keepdims=True)
        e = np.exp(shifted)
        proba = e / e.sum(axis=1, keepdims=True)
        stage: list[RegNode] = []
        for c in range(n_classes):
            residual = onehot[:, c] - proba[:, c]
            tree = grow_regression_tree(x, residual, max_depth)
            reg_tree_apply(tree, x, buf)
            scores[:, c] += learning_rate * buf
            stage.append(tree)
        stages.append(tuple(stage))
    return GradientBoostedTreesModel(
        class_catalog=train.class_catalog,
        feature_arity=d,
        stages=tuple(stages),
        learning_rate=learning_rate,
    )
