"""L2-regularised logistic regression fitted by gradient descent.

The objective is the mean negative log-likelihood plus ``||w||^2 / (2 C n)``,
i.e. the usual ``sum(loss) + ||w||^2 / (2 C)`` divided by ``n``. The bias is
not penalised. Steps use a Barzilai-Borwein trial length followed by Armijo
backtracking, so accepted steps never increase the objective.
"""

from __future__ import annotations

import numpy as np

from .base import Classifier, Dataset, LearnerError, check_training_data


def sigmoid(z: np.ndarray) -> np.ndarray:
    return np.exp(-np.logaddexp(0.0, -z))


def objective(theta: np.ndarray, X: np.ndarray, y: np.ndarray, C: float) -> float:
    """Regularised mean log-loss; ``theta`` is ``[w..., b]``."""
    w, b = theta[:-1], theta[-1]
    z = X @ w + b
    n = X.shape[0]
    return float(np.mean(np.logaddexp(0.0, z) - y * z) + np.dot(w, w) / (2.0 * C * n))


def gradient(theta: np.ndarray, X: np.ndarray, y: np.ndarray, C: float) -> np.ndarray:
    w, b = theta[:-1], theta[-1]
    n = X.shape[0]
    r = sigmoid(X @ w + b) - y
    gw = X.T @ r / n + w / (C * n)
    return np.append(gw, r.mean())


class LogisticRegression(Classifier):
    kind = "logistic_regression"

    def __init__(self, C: float = 1.0, max_iter: int = 1000, tol: float = 1e-6, random_state: int = 0):
        if not C > 0:
            raise ValueError("C must be positive")
        self.C = C
        self.max_iter = max_iter
        self.tol = tol
        self.random_state = random_state

    def get_params(self) -> dict:
        return {"C": self.C, "max_iter": self.max_iter, "tol": self.tol, "random_state": self.random_state}

    def fit(self, X, y) -> "LogisticRegression":
        X, y = check_training_data(X, y)
        yf = y.astype(float)
        self.n_features_ = X.shape[1]
        theta = np.zeros(X.shape[1] + 1)
        loss = objective(theta, X, yf, self.C)
        grad = gradient(theta, X, yf, self.C)
        self.loss_history_ = [loss]
        step = 1.0
        prev_theta = prev_grad = None
        self.n_iter_ = 0
        for it in range(self.max_iter):
            if np.linalg.norm(grad) < self.tol:
                break
            if prev_theta is not None:
                s = theta - prev_theta
                g = grad - prev_grad
                sg = float(np.dot(s, g))
                if sg > 0:
                    step = float(np.dot(s, s)) / sg
            accepted = False
            gg = float(np.dot(grad, grad))
            for _ in range(60):
                cand = theta - step * grad
                cand_loss = objective(cand, X, yf, self.C)
                if not np.isfinite(cand_loss):
                    raise LearnerError("diverged")
                if cand_loss <= loss - 1e-4 * step * gg:
                    accepted = True
                    break
                step *= 0.5
            if not accepted:
                break
            prev_theta, prev_grad = theta, grad
            theta, loss = cand, cand_loss
            grad = gradient(theta, X, yf, self.C)
            self.loss_history_.append(loss)
            self.n_iter_ = it + 1
        if not np.all(np.isfinite(theta)):
            raise LearnerError("diverged")
        self.coef_ = theta[:-1].copy()
        self.intercept_ = float(theta[-1])
        return self

    def decision_function(self, X) -> np.ndarray:
        X = self._check_X(X)
        return X @ self.coef_ + self.intercept_

    def predict_proba(self, X) -> np.ndarray:
        p = sigmoid(self.decision_function(X))
        return np.column_stack([1.0 - p, p])

    def state_dict(self) -> dict:
        return {"n_features": self.n_features_, "coef": self.coef_.tolist(), "intercept": self.intercept_}

    def load_state(self, state: dict) -> None:
        self.n_features_ = int(state["n_features"])
        self.coef_ = np.asarray(state["coef"], dtype=float)
        self.intercept_ = float(state["intercept"])


def train_logistic(data: Dataset, **params) -> LogisticRegression:
    return LogisticRegression(**params).fit(data.X, data.y)
