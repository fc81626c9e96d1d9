"""Classical baseline classifiers for the benchmark roster.

All models share the same surface as the tree ensembles: ``predict_proba``
returns one non-negative row per input summing to 1, ``predict`` takes the
argmax (ties resolve to the lexicographically first class because catalogs
are sorted). KNN, logistic, and the linear SVM expect standardized features;
standardization is the caller's job.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..domain import LabeledDataset
from .boosting import GradientBoostedTreesModel, fit_gradient_boosted_trees
from .tree import DecisionTreeModel, TreeConfig, _as_matrix, fit_decision_tree

# Per-class variance floor: keeps constant-within-class features from zeroing
# a Gaussian denominator.
_VARIANCE_FLOOR = 1e-9


def _softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


@dataclass(frozen=True)
class GaussianNBModel:
    class_catalog: tuple[str, ...]
    feature_arity: int
    means: np.ndarray       # (C, d)
    variances: np.ndarray   # (C, d), floored
    log_priors: np.ndarray  # (C,)

    kind = "gaussian_nb"

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        x = _as_matrix(x, self.feature_arity)
        # log N(x | mu, var) summed over features, per class
        ll = -0.5 * (
            np.log(2.0 * np.pi * self.variances).sum(axis=1)[None, :]
            + (((x[:, None, :] - self.means[None, :, :]) ** 2) / self.variances[None, :, :]).sum(axis=2)
        )
        return _softmax(ll + self.log_priors[None, :])

    def predict(self, x: np.ndarray) -> list[str]:
        proba = self.predict_proba(x)
        return [self.class_catalog[i] for i in np.argmax(proba, axis=1)]


def fit_gaussian_nb(train: LabeledDataset) -> GaussianNBModel:
    y = train.label_codes
    n_classes = len(train.class_catalog)
    means = np.zeros((n_classes, train.arity))
    variances = np.full((n_classes, train.arity), _VARIANCE_FLOOR)
    priors = np.zeros(n_classes)
    for c in range(n_classes):
        rows = train.x[y == c]
        if rows.shape[0] == 0:
            continue
        means[c] = rows.mean(axis=0)
        variances[c] = np.maximum(rows.var(axis=0), _VARIANCE_FLOOR)
        priors[c] = rows.shape[0] / train.n_rows
    with np.errstate(divide="ignore"):
        log_priors = np.where(priors > 0, np.log(np.maximum(priors, 1e-300)), -1e12)
    return GaussianNBModel(train.class_catalog, train.arity, means, variances, log_priors)


@dataclass(frozen=True)
class KnnModel:
    class_catalog: tuple[str, ...]
    feature_arity: int
    x_train: np.ndarray
    y_train: np.ndarray
    k: int

    kind = "knn"

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        x = _as_matrix(x, self.feature_arity)
        n_classes = len(self.class_catalog)
        out = np.zeros((x.shape[0], n_classes))
        k = min(self.k, self.x_train.shape[0])
        for i, row in enumerate(x):
            d2 = ((self.x_train - row) ** 2).sum(axis=1)
            nearest = np.argsort(d2, kind="stable")[:k]  # distance ties -> lower row index
            out[i] = np.bincount(self.y_train[nearest], minlength=n_classes) / k
        return out

    def predict(self, x: np.ndarray) -> list[str]:
        proba = self.predict_proba(x)
        return [self.class_catalog[i] for i in np.argmax(proba, axis=1)]


def fit_knn(train: LabeledDataset, k: int = 5) -> KnnModel:
    if k < 1:
        raise ValueError("k must be >= 1")
    return KnnModel(train.class_catalog, train.arity, train.x.copy(), train.label_codes.copy(), k)


@dataclass(frozen=True)
class LogisticSoftmaxModel:
    class_catalog: tuple[str, ...]
    feature_arity: int
    weights: np.ndarray  # (C, d)
    bias: np.ndarray     # (C,)

    kind = "logistic_softmax"

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        x = _as_matrix(x, self.feature_arity)
        return _softmax(x @ self.weights.T + self.bias[None, :])

    def predict(self, x: np.ndarray) -> list[str]:
        proba = self.predict_proba(x)
        return [self.class_catalog[i] for i in np.argmax(proba, axis=1)]


def fit_logistic_softmax(
    train: LabeledDataset,
    epochs: int = 500,
    learning_rate: float = 0.5,
    seed: int = 0,
) -> LogisticSoftmaxModel:
    """Full-batch gradient descent on multinomial cross-entropy."""
    n, d = train.x.shape
    n_classes = len(train.class_catalog)
    rng = np.random.default_rng(seed)
    w = rng.normal(0.0, 0.01, size=(n_classes, d))
    b = np.zeros(n_classes)
    onehot = np.zeros((n, n_classes))
    onehot[np.arange(n), train.label_codes] = 1.0
    x = train.x
    for _ in range(epochs):
        p = _softmax(x @ w.T + b[None, :])
        g = (p - onehot) / n
        w -= learning_rate * (g.T @ x)
        b -= learning_rate * g.sum(axis=0)
    return LogisticSoftmaxModel(train.class_catalog, d, w, b)


@dataclass(frozen=True)
class LinearSvmModel:
    """One-vs-rest hinge-loss separators.

    predict_proba normalizes the clipped positive margins; this is a ranking
    score, not a calibrated probability, and is flagged as such in benchmark
    reports.
    """

    class_catalog: tuple[str, ...]
    feature_arity: int
    weights: np.ndarray  # (C, d)
    bias: np.ndarray     # (C,)

    kind = "linear_svm"

    def decision_function(self, x: np.ndarray) -> np.ndarray:
        x = _as_matrix(x, self.feature_arity)
        return x @ self.weights.T + self.bias[None, :]

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        margins = self.decision_function(x)
        scores = np.clip(margins, 0.0, None)
        totals = scores.sum(axis=1, keepdims=True)
        n_classes = len(self.class_catalog)
        uniform = np.full_like(scores, 1.0 / n_classes)
        return np.where(totals > 0, scores / np.where(totals > 0, totals, 1.0), uniform)

    def predict(self, x: np.ndarray) -> list[str]:
        # argmax of raw margins; clipping would lose order among all-negative rows
        margins = self.decision_function(x)
        return [self.class_catalog[i] for i in np.argmax(margins, axis=1)]


def fit_linear_svm(
    train: LabeledDataset,
    epochs: int = 800,
    learning_rate: float = 0.2,
    reg_lambda: float = 1e-4,
) -> LinearSvmModel:
    """Full-batch subgradient descent on L2-regularized one-vs-rest hinge loss.

    Each one-vs-rest problem is heavily imbalanced (1 class against the rest),
    so violator contributions are weighted to give the positive and negative
    sides equal total mass; without this the separators collapse toward the
    majority side.
    """
    n, d = train.x.shape
    n_classes = len(train.class_catalog)
    w = np.zeros((n_classes, d))
    b = np.zeros(n_classes)
    y_signed = -np.ones((n, n_classes))
    y_signed[np.arange(n), train.label_codes] = 1.0
    pos_frac = (y_signed > 0).mean(axis=0)
    pos_frac = np.clip(pos_frac, 1.0 / n, 1.0 - 1.0 / n)
    sample_w = np.where(
        y_signed > 0, 0.5 / (n * pos_frac), 0.5 / (n * (1.0 - pos_frac))
    )
    x = train.x
    for _ in range(epochs):
        margins = (x @ w.T + b[None, :]) * y_signed
        viol = (margins < 1.0) * y_signed * sample_w  # (n, C)
        w_grad = reg_lambda * w - viol.T @ x
        b_grad = -viol.sum(axis=0)
        w -= learning_rate * w_grad
        b -= learning_rate * b_grad
    return LinearSvmModel(train.class_catalog, d, w, b)


BASELINE_KINDS = (
    "gaussian_nb",
    "knn",
    "logistic_softmax",
    "gradient_boosted_trees",
    "linear_svm",
    "single_tree",
)

BaselineModel = (
    GaussianNBModel
    | KnnModel
    | LogisticSoftmaxModel
    | LinearSvmModel
    | GradientBoostedTreesModel
    | DecisionTreeModel
)


def fit_baseline(kind: str, train: LabeledDataset, hyperparams: dict | None = None):
    """Fit one baseline by kind name. Unknown kinds raise ValueError."""
    if train.n_rows == 0:
        raise ValueError("cannot fit on an empty dataset")
    hp = dict(hyperparams or {})
    if kind == "gaussian_nb":
        return fit_gaussian_nb(train)
    if kind == "knn":
        return fit_knn(train, k=hp.get("k", 5))
    if kind == "logistic_softmax":
        return fit_logistic_softmax(
            train,
            epochs=hp.get("epochs", 500),
            learning_rate=hp.get("learning_rate", 0.5),
            seed=hp.get("seed", 0),
        )
    if kind == "gradient_boosted_trees":
        return fit_gradient_boosted_trees(
            train,
            n_stages=hp.get("n_stages", 100),
            max_depth=hp.get("max_depth", 3),
            learning_rate=hp.get("learning_rate", 0.1),
        )
    if kind == "linear_svm":
        return fit_linear_svm(
            train,
            epochs=hp.get("epochs", 800),
            learning_rate=hp.get("learning_rate", 0.2),
            reg_lambda=hp.get("reg_lambda", 1e-4),
        )
    if kind == "single_tree":
        return fit_decision_tree(
            train,
            TreeConfig(
                max_depth=hp.get("max_depth"),
                min_samples_leaf=hp.get("min_samples_leaf", 1),
            ),
        )
    raise ValueError(f"unknown baseline kind: '{kind}'")
