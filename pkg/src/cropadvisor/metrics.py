"""Classification metrics: confusion matrix, macro precision/recall/F1, log loss.

Averaging is macro (unweighted over classes) throughout; 0/0 ratios are
defined as 0. Log loss clips the true-class probability at 1e-15 so hard-zero
posteriors contribute a large finite penalty instead of infinity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

LOG_LOSS_CLIP = 1e-15


@dataclass(frozen=True)
class ConfusionMatrix:
    """Square count matrix: rows index the true class, columns the predicted."""

    class_catalog: tuple[str, ...]
    counts: np.ndarray

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.ndim != 2 or counts.shape[0] != counts.shape[1]:
            raise ValueError("counts must be square")
        if counts.shape[0] != len(self.class_catalog):
            raise ValueError("counts size must match class_catalog")
        if (counts < 0).any():
            raise ValueError("counts must be >= 0")
        counts.flags.writeable = False
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def to_csv(self) -> str:
        """Header row/column of class names around the raw counts."""
        lines = ["true\\predicted," + ",".join(self.class_catalog)]
        for name, row in zip(self.class_catalog, self.counts):
            lines.append(name + "," + ",".join(str(int(c)) for c in row))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class MetricsReport:
    accuracy: float
    precision_macro: float
    recall_macro: float
    f1_macro: float
    log_loss: float | None = None
    per_class: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "precision_macro": self.precision_macro,
            "recall_macro": self.recall_macro,
            "f1_macro": self.f1_macro,
            "log_loss": self.log_loss,
            "per_class": self.per_class,
        }


def confusion_matrix(
    truth: Sequence[str], predicted: Sequence[str], class_catalog: Sequence[str]
) -> ConfusionMatrix:
    if len(truth) != len(predicted):
        raise ValueError(f"length mismatch: {len(truth)} truth vs {len(predicted)} predicted")
    catalog = tuple(class_catalog)
    index = {c: i for i, c in enumerate(catalog)}
    counts = np.zeros((len(catalog), len(catalog)), dtype=np.int64)
    for t, p in zip(truth, predicted):
        if t not in index:
            raise ValueError(f"unknown true label: '{t}'")
        if p not in index:
            raise ValueError(f"unknown predicted label: '{p}'")
        counts[index[t], index[p]] += 1
    return ConfusionMatrix(catalog, counts)


def _safe_ratio(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    out = np.zeros_like(num, dtype=np.float64)
    np.divide(num, den, out=out, where=den > 0)
    return out


def classification_metrics(cm: ConfusionMatrix) -> MetricsReport:
    total = cm.total
    if total == 0:
        raise ValueError("cannot compute metrics on an empty confusion matrix")
    counts = cm.counts.astype(np.float64)
    diag = np.diag(counts)
    precision = _safe_ratio(diag, counts.sum(axis=0))
    recall = _safe_ratio(diag, counts.sum(axis=1))
    f1 = _safe_ratio(2.0 * precision * recall, precision + recall)
    per_class = {
        name: {
            "precision": float(precision[i]),
            "recall": float(recall[i]),
            "f1": float(f1[i]),
        }
        for i, name in enumerate(cm.class_catalog)
    }
    return MetricsReport(
        accuracy=float(diag.sum() / total),
        precision_macro=float(precision.mean()),
        recall_macro=float(recall.mean()),
        f1_macro=float(f1.mean()),
        per_class=per_class,
    )


def log_loss(
    truth: Sequence[str],
    posteriors: np.ndarray,
    class_catalog: Sequence[str],
) -> float:
    """Mean negative log probability assigned to the true class."""
    posteriors = np.asarray(posteriors, dtype=np.float64)
    if posteriors.ndim != 2:
        raise ValueError("posteriors must be a 2-D matrix")
    if len(truth) != posteriors.shape[0]:
        raise ValueError(
            f"length mismatch: {len(truth)} labels vs {posteriors.shape[0]} posteriors"
        )
    catalog = tuple(class_catalog)
    if posteriors.shape[1] != len(catalog):
        raise ValueError("posterior width must match class_catalog")
    sums = posteriors.sum(axis=1)
    if np.abs(sums - 1.0).max() > 1e-6:
        raise ValueError("posterior rows must sum to 1 within 1e-6")
    index = {c: i for i, c in enumerate(catalog)}
    try:
        cols = np.asarray([index[t] for t in truth], dtype=np.intp)
    except KeyError as exc:
        raise ValueError(f"unknown true label: {exc.args[0]!r}") from None
    p_true = posteriors[np.arange(len(truth)), cols]
    return float(-np.log(np.clip(p_true, LOG_LOSS_CLIP, 1.0)).mean())
