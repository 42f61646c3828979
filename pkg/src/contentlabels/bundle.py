"""Model bundle serialization.

A bundle is one JSON document holding the standardizer, the three
dimension models as explicit node records, the embedding provider spec,
the chosen hyperparameters, and the held-out evaluation report. The
version string is a content hash over everything except trained_at, so
retraining on identical inputs yields an identical version.
"""

import hashlib
import json

import numpy as np

from .boosting import GbtModel, GbtParams, RegressionTree
from .embed import EmbeddingProviderSpec, Standardizer
from .errors import FileMissing, ParseError
from .learn import Dimension, DimensionEval, EvaluationReport, ModelBundle

BUNDLE_FORMAT = "contentlabels-bundle"
BUNDLE_FORMAT_VERSION = 1


def _tree_to_dict(tree: RegressionTree) -> dict:
    nodes = []
    for i in range(len(tree.feature)):
        if tree.feature[i] < 0:
            nodes.append({"leaf": True, "value": float(tree.value[i])})
        else:
            nodes.append({
                "leaf": False,
                "feature": int(tree.feature[i]),
                "threshold": float(tree.threshold[i]),
                "left": int(tree.left[i]),
                "right": int(tree.right[i]),
            })
    return {"nodes": nodes}


def _tree_from_dict(data: dict) -> RegressionTree:
    nodes = data["nodes"]
    n = len(nodes)
    feature = np.full(n, -1, dtype=np.intp)
    threshold = np.zeros(n, dtype=np.float64)
    left = np.full(n, -1, dtype=np.intp)
    right = np.full(n, -1, dtype=np.intp)
    value = np.zeros(n, dtype=np.float64)
    for i, node in enumerate(nodes):
        if node["leaf"]:
            value[i] = node["value"]
        else:
            feature[i] = node["feature"]
            threshold[i] = node["threshold"]
            left[i] = node["left"]
            right[i] = node["right"]
    return RegressionTree(feature=feature, threshold=threshold, left=left,
                          right=right, value=value)


def _params_to_dict(params: GbtParams) -> dict:
    return {
        "n_estimators": params.n_estimators,
        "learning_rate": params.learning_rate,
        "max_depth": params.max_depth,
        "min_samples_leaf": params.min_samples_leaf,
        "loss": params.loss,
    }


def _params_from_dict(data: dict) -> GbtParams:
    return GbtParams(
        n_estimators=data["n_estimators"],
        learning_rate=data["learning_rate"],
        max_depth=data["max_depth"],
        min_samples_leaf=data.get("min_samples_leaf", 1),
        loss=data.get("loss", "squared-error"),
    )


def _model_to_dict(model: GbtModel) -> dict:
    return {
        "base_prediction": float(model.base_prediction),
        "n_features": int(model.n_features),
        "params": _params_to_dict(model.params),
        "trees": [_tree_to_dict(t) for t in model.trees],
    }


def _model_from_dict(data: dict) -> GbtModel:
    return GbtModel(
        base_prediction=data["base_prediction"],
        trees=[_tree_from_dict(t) for t in data["trees"]],
        params=_params_from_dict(data["params"]),
        n_features=data.get("n_features", 0),
    )


def bundle_to_dict(bundle: ModelBundle) -> dict:
    report = bundle.report
    return {
        "format": BUNDLE_FORMAT,
        "format_version": BUNDLE_FORMAT_VERSION,
        "version": bundle.version,
        "trained_at": bundle.trained_at,
        "provider": {
            "provider_id": bundle.provider_spec.provider_id,
            "dim": bundle.provider_spec.dim,
            "parameters": dict(bundle.provider_spec.parameters),
        },
        "standardizer": {
            "means": [float(v) for v in bundle.standardizer.means],
            "stds": [float(v) for v in bundle.standardizer.stds],
        },
        "models": {
            dim.value: _model_to_dict(bundle.models[dim]) for dim in Dimension
        },
        "best_params": {
            dim.value: _params_to_dict(bundle.best_params[dim]) for dim in Dimension
        },
        "report": {
            "split_seed": report.split_seed,
            "train_fraction": report.train_fraction,
            "per_dimension": {
                dim.value: {
                    "pearson_r": report.per_dimension[dim].pearson_r,
                    "p_value": report.per_dimension[dim].p_value,
                    "n_test": report.per_dimension[dim].n_test,
                }
                for dim in Dimension
            },
        },
    }


def compute_bundle_version(bundle: ModelBundle) -> str:
    """Deterministic content hash, independent of trained_at and version."""
    payload = bundle_to_dict(bundle)
    payload.pop("trained_at")
    payload.pop("version")
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    digest = hashlib.blake2b(canonical.encode("utf-8"), digest_size=6).hexdigest()
    return f"v1-{digest}"


def save_bundle(bundle: ModelBundle, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(bundle_to_dict(bundle), handle)
        handle.write("\n")


def bundle_from_dict(data: dict) -> ModelBundle:
    if data.get("format") != BUNDLE_FORMAT:
        raise ParseError(f"not a {BUNDLE_FORMAT} document")
    provider = data["provider"]
    spec = EmbeddingProviderSpec(
        provider_id=provider["provider_id"],
        dim=provider["dim"],
        parameters=provider.get("parameters", {}),
    )
    standardizer = Standardizer(
        means=np.asarray(data["standardizer"]["means"], dtype=np.float64),
        stds=np.asarray(data["standardizer"]["stds"], dtype=np.float64),
    )
    models = {Dimension(k): _model_from_dict(v) for k, v in data["models"].items()}
    best_params = {Dimension(k): _params_from_dict(v)
                   for k, v in data["best_params"].items()}
    raw = data["report"]
    report = EvaluationReport(
        per_dimension={
            Dimension(k): DimensionEval(
                pearson_r=v["pearson_r"], p_value=v["p_value"], n_test=v["n_test"])
            for k, v in raw["per_dimension"].items()
        },
        split_seed=raw["split_seed"],
        train_fraction=raw["train_fraction"],
    )
    return ModelBundle(
        standardizer=standardizer,
        models=models,
        provider_spec=spec,
        best_params=best_params,
        report=report,
        version=data["version"],
        trained_at=data["trained_at"],
    )


def load_bundle(path) -> ModelBundle:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except FileNotFoundError as exc:
        raise FileMissing(str(path)) from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from None
    return bundle_from_dict(data)
