from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


class LearnerError(RuntimeError):
    """Training failed (e.g. the optimisation diverged)."""


class DimensionError(ValueError):
    pass


@dataclass
class Dataset:
    X: np.ndarray
    y: np.ndarray
    feature_names: tuple[str, ...]

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=float)
        self.y = np.asarray(self.y, dtype=np.int64)
        if self.X.ndim != 2 or self.X.shape[0] != self.y.shape[0]:
            raise DimensionError(f"X has shape {self.X.shape} but y has {self.y.shape[0]} labels")
        if self.X.shape[1] != len(self.feature_names):
            raise DimensionError("feature_names do not match the columns of X")
        if self.X.shape[0] < 2:
            raise ValueError("a dataset needs at least 2 rows")
        if not np.all(np.isfinite(self.X)):
            raise ValueError("dataset contains NaN or infinite values")
        if not np.all((self.y == 0) | (self.y == 1)):
            raise ValueError("labels must be 0 or 1")
        self.feature_names = tuple(self.feature_names)

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    def select(self, columns: Sequence[int]) -> "Dataset":
        columns = list(columns)
        return Dataset(self.X[:, columns], self.y, tuple(self.feature_names[c] for c in columns))


def check_training_data(X, y) -> tuple[np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise DimensionError(f"X has shape {X.shape} but y has {y.shape[0]} labels")
    if not np.all(np.isfinite(X)):
        raise ValueError("training data contains NaN or infinite values")
    if not np.all((y == 0) | (y == 1)):
        raise ValueError("labels must be 0 or 1")
    return X, y


class Classifier:
    """Binary classifier interface: ``fit`` returns self, ``predict_proba`` returns (n, 2)."""

    kind = "classifier"
    n_features_: int

    def fit(self, X, y) -> "Classifier":
        raise NotImplementedError

    def predict_proba(self, X) -> np.ndarray:
        raise NotImplementedError

    def predict(self, X) -> np.ndarray:
        return np.argmax(self.predict_proba(X), axis=1).astype(np.int64)

    def _check_X(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X.reshape(1, -1)
        if X.shape[1] != self.n_features_:
            raise DimensionError(f"model was trained on {self.n_features_} features, got {X.shape[1]}")
        return X

    def get_params(self) -> dict:
        raise NotImplementedError

    def state_dict(self) -> dict:
        raise NotImplementedError

    def load_state(self, state: dict) -> None:
        raise NotImplementedError


def predict(model: Classifier, X) -> tuple[np.ndarray, np.ndarray]:
    """Labels and class probabilities (columns: real, fake)."""
    proba = model.predict_proba(X)
    return np.argmax(proba, axis=1).astype(np.int64), proba
