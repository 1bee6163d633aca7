"""From-scratch binary classifiers behind a common fit/predict interface."""

from __future__ import annotations

import json
import os

from ..corpus import atomic_write_text
from .base import Classifier, Dataset, DimensionError, LearnerError, predict
from .bayes import GaussianNB, train_gnb
from .linear import LogisticRegression, train_logistic
from .mlp import MLP, train_mlp
from .tree import (
    DecisionTree,
    RandomForest,
    TreeNode,
    impurity,
    impurity_decrease,
    train_forest,
    train_tree,
)

# short names used on the command line and in grid configs
CLASSIFIERS: dict[str, type[Classifier]] = {
    "dt": DecisionTree,
    "rf": RandomForest,
    "lr": LogisticRegression,
    "nb": GaussianNB,
    "mlp": MLP,
}
_BY_KIND = {cls.kind: cls for cls in CLASSIFIERS.values()}
SEEDED = frozenset({"dt", "rf", "lr", "mlp"})

MODEL_FORMAT_VERSION = 1


def make_classifier(name: str, params: dict | None = None, seed: int | None = None) -> Classifier:
    try:
        cls = CLASSIFIERS[name]
    except KeyError:
        raise ValueError(f"unknown classifier {name!r}; choose from {', '.join(CLASSIFIERS)}") from None
    params = dict(params or {})
    if seed is not None and name in SEEDED:
        params.setdefault("random_state", seed)
    return cls(**params)


def model_to_dict(model: Classifier) -> dict:
    return {
        "format_version": MODEL_FORMAT_VERSION,
        "kind": model.kind,
        "params": model.get_params(),
        "state": model.state_dict(),
    }


def model_from_dict(payload: dict) -> Classifier:
    if payload.get("format_version") != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model format version {payload.get('format_version')!r}")
    cls = _BY_KIND[payload["kind"]]
    model = cls(**payload["params"])
    model.load_state(payload["state"])
    return model


def save_model(model: Classifier, path: str | os.PathLike) -> None:
    atomic_write_text(path, json.dumps(model_to_dict(model), sort_keys=True))


def load_model(path: str | os.PathLike) -> Classifier:
    with open(path, encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))


__all__ = [
    "CLASSIFIERS",
    "Classifier",
    "Dataset",
    "DecisionTree",
    "DimensionError",
    "GaussianNB",
    "LearnerError",
    "LogisticRegression",
    "MLP",
    "RandomForest",
    "TreeNode",
    "impurity",
    "impurity_decrease",
    "load_model",
    "make_classifier",
    "model_from_dict",
    "model_to_dict",
    "predict",
    "save_model",
    "train_forest",
    "train_gnb",
    "train_logistic",
    "train_mlp",
    "train_tree",
]
