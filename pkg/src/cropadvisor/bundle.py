"""Versioned JSON model bundle: every fitted artifact the service needs.

Format notes:

- all reals are stored as shortest round-trip decimal strings, so a
  save/load cycle reproduces bit-identical predictions;
- the ``bundle`` body is checksummed (sha256 over its canonical JSON) and
  verified on load;
- out-of-bag masks are bit-packed hex strings.

The canonical file suffix is ``.kisan.json``.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .domain import FeatureSchema, StandardizerParams
from .forecast import PriceModel, PricePoint, PriceSeries
from .models import DecisionTreeModel, ForestConfig, RandomForestModel, TreeConfig
from .models.tree import TreeNode

BUNDLE_FORMAT_VERSION = 1
BUNDLE_SUFFIX = ".kisan.json"


class BundleError(ValueError):
    """Unreadable, corrupted, or unsupported bundle file."""


def _f2s(x: float) -> str:
    return repr(float(x))


def _s2f(s: str) -> float:
    return float(s)


def _floats_out(values) -> list[str]:
    return [_f2s(v) for v in values]


def _floats_in(values) -> tuple[float, ...]:
    return tuple(_s2f(v) for v in values)


def _node_to_dict(node: TreeNode) -> dict:
    if node.is_leaf:
        return {"counts": [int(c) for c in node.counts], "n": int(node.n_samples)}
    return {
        "feature": int(node.feature),
        "threshold": _f2s(node.threshold),
        "n": int(node.n_samples),
        "decrease": _f2s(node.decrease),
        "left": _node_to_dict(node.left),
        "right": _node_to_dict(node.right),
    }


def _node_from_dict(doc: dict) -> TreeNode:
    if "counts" in doc:
        return TreeNode(
            counts=np.asarray(doc["counts"], dtype=np.int64), n_samples=int(doc["n"])
        )
    return TreeNode(
        feature=int(doc["feature"]),
        threshold=_s2f(doc["threshold"]),
        n_samples=int(doc["n"]),
        decrease=_s2f(doc["decrease"]),
        left=_node_from_dict(doc["left"]),
        right=_node_from_dict(doc["right"]),
    )


def _schema_to_dict(schema: FeatureSchema) -> dict:
    return {"schema_id": schema.schema_id, "feature_names": list(schema.feature_names)}


def _schema_from_dict(doc: dict) -> FeatureSchema:
    return FeatureSchema(doc["schema_id"], tuple(doc["feature_names"]))


def _masks_to_hex(masks: np.ndarray) -> dict:
    packed = np.packbits(masks.astype(np.uint8), axis=1)
    return {"n_rows": int(masks.shape[1]), "rows": [bytes(r).hex() for r in packed]}


def _masks_from_hex(doc: dict) -> np.ndarray:
    rows = [np.frombuffer(bytes.fromhex(h), dtype=np.uint8) for h in doc["rows"]]
    if not rows:
        return np.zeros((0, doc["n_rows"]), dtype=bool)
    packed = np.vstack(rows)
    return np.unpackbits(packed, axis=1)[:, : doc["n_rows"]].astype(bool)


def forest_to_dict(model: RandomForestModel) -> dict:
    return {
        "kind": model.kind,
        "class_catalog": list(model.class_catalog),
        "feature_arity": model.feature_arity,
        "feature_names": list(model.feature_names),
        "config": {
            "n_trees": model.config.n_trees,
            "features_per_split": model.config.features_per_split,
            "max_depth": model.config.max_depth,
            "min_samples_leaf": model.config.min_samples_leaf,
            "bootstrap": model.config.bootstrap,
            "seed": model.config.seed,
        },
        "oob_masks": _masks_to_hex(model.oob_masks),
        "trees": [_node_to_dict(t) for t in model.trees],
    }


def forest_from_dict(doc: dict) -> RandomForestModel:
    cfg = doc["config"]
    return RandomForestModel(
        trees=tuple(_node_from_dict(t) for t in doc["trees"]),
        class_catalog=tuple(doc["class_catalog"]),
        feature_arity=int(doc["feature_arity"]),
        feature_names=tuple(doc["feature_names"]),
        oob_masks=_masks_from_hex(doc["oob_masks"]),
        config=ForestConfig(
            n_trees=cfg["n_trees"],
            features_per_split=cfg["features_per_split"],
            max_depth=cfg["max_depth"],
            min_samples_leaf=cfg["min_samples_leaf"],
            bootstrap=cfg["bootstrap"],
            seed=cfg["seed"],
        ),
    )


def tree_model_to_dict(model: DecisionTreeModel) -> dict:
    return {
        "kind": model.kind,
        "class_catalog": list(model.class_catalog),
        "feature_arity": model.feature_arity,
        "feature_names": list(model.feature_names),
        "config": {
            "max_depth": model.config.max_depth,
            "min_samples_leaf": model.config.min_samples_leaf,
        },
        "root": _node_to_dict(model.root),
    }


def tree_model_from_dict(doc: dict) -> DecisionTreeModel:
    return DecisionTreeModel(
        root=_node_from_dict(doc["root"]),
        class_catalog=tuple(doc["class_catalog"]),
        feature_arity=int(doc["feature_arity"]),
        feature_names=tuple(doc["feature_names"]),
        config=TreeConfig(
            max_depth=doc["config"]["max_depth"],
            min_samples_leaf=doc["config"]["min_samples_leaf"],
        ),
    )


def price_model_to_dict(model: PriceModel) -> dict:
    return {
        "crop_id": model.crop_id,
        "t0_index": model.t0_index,
        "t1_index": model.t1_index,
        "intercept": _f2s(model.intercept),
        "slope": _f2s(model.slope),
        "changepoints": _floats_out(model.changepoints),
        "changepoint_deltas": _floats_out(model.changepoint_deltas),
        "fourier_order": model.fourier_order,
        "fourier_coeffs": [[_f2s(a), _f2s(b)] for a, b in model.fourier_coeffs],
        "ridge_lambda": _f2s(model.ridge_lambda),
        "residual_sigma": _f2s(model.residual_sigma),
        "last_year": model.last_year,
        "last_month": model.last_month,
    }


def price_model_from_dict(doc: dict) -> PriceModel:
    return PriceModel(
        crop_id=doc["crop_id"],
        t0_index=int(doc["t0_index"]),
        t1_index=int(doc["t1_index"]),
        intercept=_s2f(doc["intercept"]),
        slope=_s2f(doc["slope"]),
        changepoints=_floats_in(doc["changepoints"]),
        changepoint_deltas=_floats_in(doc["changepoint_deltas"]),
        fourier_order=int(doc["fourier_order"]),
        fourier_coeffs=tuple((_s2f(a), _s2f(b)) for a, b in doc["fourier_coeffs"]),
        ridge_lambda=_s2f(doc["ridge_lambda"]),
        residual_sigma=_s2f(doc["residual_sigma"]),
        last_year=int(doc["last_year"]),
        last_month=int(doc["last_month"]),
    )


def series_to_dict(series: PriceSeries) -> dict:
    return {
        "crop_id": series.crop_id,
        "points": [[p.year, p.month, _f2s(p.price)] for p in series.points],
    }


def series_from_dict(doc: dict) -> PriceSeries:
    return PriceSeries(
        doc["crop_id"],
        tuple(PricePoint(int(y), int(m), _s2f(p)) for y, m, p in doc["points"]),
    )


@dataclass(frozen=True)
class ModelBundle:
    """Everything the service and offline CLI need to answer requests."""

    forest: RandomForestModel
    crop_schema: FeatureSchema
    standardizer: StandardizerParams  # training-corpus scaler, kept for reproducibility
    fertilizer_model: DecisionTreeModel
    fertilizer_schema: FeatureSchema
    price_models: dict[str, PriceModel]
    price_history: dict[str, PriceSeries]
    fingerprints: dict = field(default_factory=dict)
    created_at: str = ""

    @property
    def crop_catalog(self) -> tuple[str, ...]:
        return self.forest.class_catalog

    @property
    def fertilizer_catalog(self) -> tuple[str, ...]:
        return self.fertilizer_model.class_catalog

    def body_dict(self) -> dict:
        return {
            "forest": forest_to_dict(self.forest),
            "crop_schema": _schema_to_dict(self.crop_schema),
            "standardizer": {
                "means": _floats_out(self.standardizer.means),
                "stdevs": _floats_out(self.standardizer.stdevs),
            },
            "fertilizer_model": tree_model_to_dict(self.fertilizer_model),
            "fertilizer_schema": _schema_to_dict(self.fertilizer_schema),
            "price_models": {
                crop: price_model_to_dict(m) for crop, m in sorted(self.price_models.items())
            },
            "price_history": {
                crop: series_to_dict(s) for crop, s in sorted(self.price_history.items())
            },
            "fingerprints": self.fingerprints,
        }


def _checksum(body: dict) -> str:
    canonical = json.dumps(body, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def save_bundle(bundle: ModelBundle, path: str | Path) -> None:
    body = bundle.body_dict()
    doc = {
        "format_version": BUNDLE_FORMAT_VERSION,
        "created_at": bundle.created_at or datetime.now(timezone.utc).isoformat(),
        "checksum": _checksum(body),
        "bundle": body,
    }
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def load_bundle(path: str | Path) -> ModelBundle:
    path = Path(path)
    if not path.exists():
        raise BundleError(f"bundle file not found: {path}")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise BundleError(f"corrupted bundle {path}: {exc}") from None
    if not isinstance(doc, dict) or "format_version" not in doc:
        raise BundleError(f"corrupted bundle {path}: missing format_version")
    version = doc["format_version"]
    if version != BUNDLE_FORMAT_VERSION:
        raise BundleError(f"unsupported bundle format version: {version}")
    body = doc.get("bundle")
    if body is None:
        raise BundleError(f"corrupted bundle {path}: missing bundle body")
    if _checksum(body) != doc.get("checksum"):
        raise BundleError(f"checksum mismatch in {path}")
    return ModelBundle(
        forest=forest_from_dict(body["forest"]),
        crop_schema=_schema_from_dict(body["crop_schema"]),
        standardizer=StandardizerParams(
            _floats_in(body["standardizer"]["means"]),
            _floats_in(body["standardizer"]["stdevs"]),
        ),
        fertilizer_model=tree_model_from_dict(body["fertilizer_model"]),
        fertilizer_schema=_schema_from_dict(body["fertilizer_schema"]),
        price_models={
            crop: price_model_from_dict(m) for crop, m in body["price_models"].items()
        },
        price_history={
            crop: series_from_dict(s) for crop, s in body["price_history"].items()
        },
        fingerprints=body.get("fingerprints", {}),
        created_at=doc.get("created_at", ""),
    )
