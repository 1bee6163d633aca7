from __future__ import annotations

import numpy as np

from .base import Classifier, Dataset, check_training_data


class GaussianNB(Classifier):
    """Gaussian naive Bayes with maximum-likelihood means, variances and priors."""

    kind = "gaussian_nb"

    def __init__(self, var_floor: float = 1e-9):
        self.var_floor = var_floor

    def get_params(self) -> dict:
        return {"var_floor": self.var_floor}

    def fit(self, X, y) -> "GaussianNB":
        X, y = check_training_data(X, y)
        self.n_features_ = X.shape[1]
        self.means_ = np.zeros((2, X.shape[1]))
        self.vars_ = np.ones((2, X.shape[1]))
        self.priors_ = np.zeros(2)
        for c in (0, 1):
            Xc = X[y == c]
            self.priors_[c] = Xc.shape[0] / X.shape[0]
            if Xc.shape[0]:
                self.means_[c] = Xc.mean(axis=0)
                self.vars_[c] = np.maximum(Xc.var(axis=0), self.var_floor)
        return self

    def joint_log_likelihood(self, X) -> np.ndarray:
        X = self._check_X(X)
        out = np.empty((X.shape[0], 2))
        for c in (0, 1):
            ll = -0.5 * np.sum(np.log(2.0 * np.pi * self.vars_[c]) + (X - self.means_[c]) ** 2 / self.vars_[c], axis=1)
            out[:, c] = ll + (np.log(self.priors_[c]) if self.priors_[c] > 0 else -np.inf)
        return out

    def predict_proba(self, X) -> np.ndarray:
        jll = self.joint_log_likelihood(X)
        m = jll.max(axis=1, keepdims=True)
        p = np.exp(jll - m)
        return p / p.sum(axis=1, keepdims=True)

    def state_dict(self) -> dict:
        return {"n_features": self.n_features_, "means": self.means_.tolist(), "vars": self.vars_.tolist(),
                "priors": self.priors_.tolist()}

    def load_state(self, state: dict) -> None:
        self.n_features_ = int(state["n_features"])
        self.means_ = np.asarray(state["means"], dtype=float)
        self.vars_ = np.asarray(state["vars"], dtype=float)
        self.priors_ = np.asarray(state["priors"], dtype=float)


def train_gnb(data: Dataset, **params) -> GaussianNB:
    return GaussianNB(**params).fit(data.X, data.y)
