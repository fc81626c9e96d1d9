"""Shared domain model: feature schemas, validated samples, datasets, scaling, splits.

Conventions enforced here and relied on everywhere else:

- standard deviations are population (divide-by-n), so a standardized
  non-degenerate column has std exactly 1;
- zero-variance columns standardize to 0 instead of raising;
- class catalogs are sorted lexicographically and define the index order of
  every probability vector and confusion matrix in the package.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class ValidationError(ValueError):
    """Domain validation failure carrying machine-readable (field, message) pairs."""

    def __init__(self, field_errors: Iterable[tuple[str, str]]):
        self.field_errors = tuple(field_errors)
        super().__init__("; ".join(msg for _, msg in self.field_errors))


@dataclass(frozen=True)
class FeatureSchema:
    """Names and order of the features a vector or dataset is expressed in."""

    schema_id: str
    feature_names: tuple[str, ...]

    @property
    def arity(self) -> int:
        return len(self.feature_names)


CROP_SCHEMA = FeatureSchema(
    "crop", ("n", "p", "k", "temperature", "humidity", "ph", "rainfall")
)
CROP_MARKET_SCHEMA = FeatureSchema(
    "crop_market", (*CROP_SCHEMA.feature_names, "market_price")
)

#: Fields of a SoilSample whose only constraint is finiteness plus non-negativity.
_NONNEGATIVE_FIELDS = ("n", "p", "k", "rainfall")


@dataclass(frozen=True)
class SoilSample:
    """One set of agronomic measurements (kg/ha for N/P/K, degC, percent, pH, mm)."""

    n: float
    p: float
    k: float
    temperature: float
    humidity: float
    ph: float
    rainfall: float

    def to_vector(self) -> "FeatureVector":
        return FeatureVector(
            (self.n, self.p, self.k, self.temperature, self.humidity, self.ph, self.rainfall),
            CROP_SCHEMA.schema_id,
        )


def validate_soil_sample(sample: SoilSample) -> SoilSample:
    """Return the sample unchanged, or raise ValidationError naming every bad field."""
    errors: list[tuple[str, str]] = []
    for name in ("n", "p", "k", "temperature", "humidity", "ph", "rainfall"):
        value = getattr(sample, name)
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            errors.append((name, f"{name} must be a number"))
            continue
        if not math.isfinite(value):
            errors.append((name, f"{name} is not finite"))
            continue
        if name in _NONNEGATIVE_FIELDS and value < 0:
            errors.append((name, f"{name} must be >= 0"))
        elif name == "humidity" and not (0.0 <= value <= 100.0):
            errors.append((name, "humidity out of [0,100]"))
        elif name == "ph" and not (0.0 <= value <= 14.0):
            errors.append((name, "ph out of [0,14]"))
    if errors:
        raise ValidationError(errors)
    return sample


@dataclass(frozen=True)
class FeatureVector:
    """An ordered, finite value tuple tagged with the schema it is expressed in."""

    values: tuple[float, ...]
    schema_id: str

    def __post_init__(self):
        coerced = tuple(float(v) for v in self.values)
        if any(not math.isfinite(v) for v in coerced):
            raise ValidationError([("values", "feature values must be finite")])
        object.__setattr__(self, "values", coerced)

    def __len__(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.float64)


def check_arity(schema: FeatureSchema, vector: FeatureVector) -> None:
    if len(vector) != schema.arity:
        raise ValidationError(
            [("values", f"arity mismatch: got {len(vector)} values, schema "
                        f"'{schema.schema_id}' has {schema.arity}")]
        )


@dataclass(frozen=True)
class LabeledDataset:
    """A feature matrix with labels and its canonical (lexicographic) class catalog."""

    schema: FeatureSchema
    x: np.ndarray
    labels: tuple[str, ...]
    class_catalog: tuple[str, ...]

    def __post_init__(self):
        x = np.ascontiguousarray(np.asarray(self.x, dtype=np.float64))
        if x.ndim != 2:
            raise ValueError("x must be a 2-D matrix")
        if x.shape[1] != self.schema.arity:
            raise ValueError(
                f"x has {x.shape[1]} columns, schema '{self.schema.schema_id}' "
                f"has arity {self.schema.arity}"
            )
        if not np.isfinite(x).all():
            raise ValueError("x contains non-finite values")
        if x.shape[0] != len(self.labels):
            raise ValueError("labels length must match row count")
        if list(self.class_catalog) != sorted(set(self.class_catalog)):
            raise ValueError("class_catalog must be sorted and distinct")
        known = set(self.class_catalog)
        unknown = sorted({lab for lab in self.labels if lab not in known})
        if unknown:
            raise ValueError(f"labels not in class_catalog: {unknown}")
        x.flags.writeable = False
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "class_catalog", tuple(self.class_catalog))

    @property
    def n_rows(self) -> int:
        return self.x.shape[0]

    @property
    def arity(self) -> int:
        return self.x.shape[1]

    @property
    def schema_id(self) -> str:
        return self.schema.schema_id

    @cached_property
    def label_codes(self) -> np.ndarray:
        """Labels as integer indices into class_catalog."""
        index = {c: i for i, c in enumerate(self.class_catalog)}
        return np.asarray([index[lab] for lab in self.labels], dtype=np.intp)

    def subset(self, indices: Sequence[int]) -> "LabeledDataset":
        """Row subset keeping the schema and the full class catalog."""
        idx = np.asarray(indices, dtype=np.intp)
        return LabeledDataset(
            self.schema,
            self.x[idx].copy(),
            tuple(self.labels[i] for i in idx),
            self.class_catalog,
        )


def make_dataset(
    schema: FeatureSchema,
    x: np.ndarray | Sequence[Sequence[float]],
    labels: Sequence[str],
    class_catalog: Sequence[str] | None = None,
) -> LabeledDataset:
    catalog = tuple(class_catalog) if class_catalog is not None else tuple(sorted(set(labels)))
    return LabeledDataset(schema, np.asarray(x, dtype=np.float64), tuple(labels), catalog)


@dataclass(frozen=True)
class StandardizerParams:
    """Per-column centering/scaling parameters (population std)."""

    means: tuple[float, ...]
    stdevs: tuple[float, ...]

    def __post_init__(self):
        if len(self.means) != len(self.stdevs):
            raise ValueError("means and stdevs must have equal length")
        if any(s < 0 for s in self.stdevs):
            raise ValueError("stdevs must be >= 0")


def fit_standardizer(dataset: LabeledDataset) -> StandardizerParams:
    if dataset.n_rows == 0:
        raise ValueError("cannot fit standardizer on an empty dataset")
    means = dataset.x.mean(axis=0)
    stdevs = dataset.x.std(axis=0)  # population (ddof=0)
    return StandardizerParams(tuple(float(m) for m in means), tuple(float(s) for s in stdevs))


def transform_matrix(params: StandardizerParams, x: np.ndarray) -> np.ndarray:
    """Standardize a matrix; zero-variance columns map to 0."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != len(params.means):
        raise ValueError(
            f"arity mismatch: got {x.shape[-1]} columns, standardizer has {len(params.means)}"
        )
    means = np.asarray(params.means)
    stdevs = np.asarray(params.stdevs)
    safe = np.where(stdevs > 0, stdevs, 1.0)
    out = (x - means) / safe
    return np.where(stdevs > 0, out, 0.0)


def apply_standardizer(params: StandardizerParams, v: FeatureVector) -> FeatureVector:
    if len(v) != len(params.means):
        raise ValidationError(
            [("values", f"arity mismatch: got {len(v)} values, standardizer has "
                        f"{len(params.means)}")]
        )
    out = transform_matrix(params, v.as_array())
    return FeatureVector(tuple(float(z) for z in out), v.schema_id)


def standardize_dataset(params: StandardizerParams, dataset: LabeledDataset) -> LabeledDataset:
    return LabeledDataset(
        dataset.schema,
        transform_matrix(params, dataset.x),
        dataset.labels,
        dataset.class_catalog,
    )


def dataset_fingerprint(dataset: LabeledDataset) -> dict:
    """Row/class counts plus a content hash that changes iff any cell changes."""
    h = hashlib.sha256()
    h.update(dataset.schema.schema_id.encode())
    h.update("\x1f".join(dataset.schema.feature_names).encode())
    for row, label in zip(dataset.x, dataset.labels):
        h.update(("\x1f".join(repr(float(v)) for v in row) + "\x1e" + label).encode())
    return {
        "rows": dataset.n_rows,
        "classes": len(dataset.class_catalog),
        "sha256": h.hexdigest(),
    }


def stratified_split(
    dataset: LabeledDataset, test_fraction: float, seed: int
) -> tuple[LabeledDataset, LabeledDataset]:
    """Deterministic per-class split.

    Each class contributes round(count * test_fraction) rows to the test half,
    clamped to [1, count-1] so neither half loses a class entirely. Classes are
    processed in catalog order so the result depends only on (dataset, fraction,
    seed).
    """
    if not (0.0 < test_fraction < 1.0):
        raise ValueError("test_fraction must be in (0, 1)")
    labels = np.asarray(dataset.labels)
    rng = np.random.default_rng(seed)
    test_idx: list[int] = []
    for cls in dataset.class_catalog:
        cls_idx = np.nonzero(labels == cls)[0]
        count = cls_idx.size
        if count == 0:
            continue
        if count < 2:
            raise ValueError(f"class '{cls}' has a single row; cannot split")
        n_test = int(math.floor(count * test_fraction + 0.5))
        n_test = min(max(n_test, 1), count - 1)
        perm = rng.permutation(cls_idx)
        test_idx.extend(int(i) for i in perm[:n_test])
    test_set = set(test_idx)
    train_idx = [i for i in range(dataset.n_rows) if i not in test_set]
    return dataset.subset(train_idx), dataset.subset(sorted(test_idx))
