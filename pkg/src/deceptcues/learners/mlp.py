"""One-hidden-layer perceptron with a logistic output unit.

Trained by full-batch gradient descent on mean cross-entropy plus
``l2 / 2`` times the squared weights (biases unpenalised). Hidden weights
start Glorot-uniform; output weights start at zero, so an untrained network
outputs exactly 0.5.
"""

from __future__ import annotations

import numpy as np

from .base import Classifier, Dataset, LearnerError, check_training_data

ACTIVATIONS = ("tanh", "relu", "logistic")


def _act(z: np.ndarray, kind: str) -> tuple[np.ndarray, np.ndarray]:
    """Activation and its derivative."""
    if kind == "tanh":
        a = np.tanh(z)
        return a, 1.0 - a * a
    if kind == "relu":
        return np.maximum(z, 0.0), (z > 0).astype(float)
    if kind == "logistic":
        a = np.exp(-np.logaddexp(0.0, -z))
        return a, a * (1.0 - a)
    raise ValueError(f"unknown activation {kind!r}")


def unpack(theta: np.ndarray, d: int, h: int):
    W1 = theta[: d * h].reshape(d, h)
    b1 = theta[d * h: d * h + h]
    w2 = theta[d * h + h: d * h + 2 * h]
    b2 = theta[-1]
    return W1, b1, w2, b2


def loss_and_grad(theta: np.ndarray, X: np.ndarray, y: np.ndarray, hidden: int, l2: float,
                  activation: str = "tanh") -> tuple[float, np.ndarray]:
    """Objective value and gradient for the flat parameter vector ``theta``."""
    n, d = X.shape
    W1, b1, w2, b2 = unpack(theta, d, hidden)
    a, da = _act(X @ W1 + b1, activation)
    z = a @ w2 + b2
    loss = float(np.mean(np.logaddexp(0.0, z) - y * z)) + 0.5 * l2 * (np.sum(W1 * W1) + np.dot(w2, w2))
    r = (np.exp(-np.logaddexp(0.0, -z)) - y) / n
    g_w2 = a.T @ r + l2 * w2
    g_b2 = r.sum()
    delta = np.outer(r, w2) * da
    g_W1 = X.T @ delta + l2 * W1
    g_b1 = delta.sum(axis=0)
    return loss, np.concatenate([g_W1.ravel(), g_b1, g_w2, [g_b2]])


class MLP(Classifier):
    kind = "mlp"

    def __init__(self, hidden_width: int = 8, activation: str = "tanh", learning_rate: float = 0.1,
                 epochs: int = 1000, l2: float = 1e-4, random_state: int = 0):
        if activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {activation!r}")
        self.hidden_width = hidden_width
        self.activation = activation
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.l2 = l2
        self.random_state = random_state

    def get_params(self) -> dict:
        return {
            "hidden_width": self.hidden_width,
            "activation": self.activation,
            "learning_rate": self.learning_rate,
            "epochs": self.epochs,
            "l2": self.l2,
            "random_state": self.random_state,
        }

    def init_params(self, d: int) -> np.ndarray:
        h = self.hidden_width
        rng = np.random.default_rng(self.random_state)
        limit = np.sqrt(6.0 / (d + h))
        return np.concatenate([rng.uniform(-limit, limit, d * h), np.zeros(h), np.zeros(h), [0.0]])

    def fit(self, X, y) -> "MLP":
        X, y = check_training_data(X, y)
        yf = y.astype(float)
        self.n_features_ = X.shape[1]
        theta = self.init_params(X.shape[1])
        self.loss_history_ = []
        with np.errstate(over="ignore", invalid="ignore"):
            for _ in range(self.epochs):
                loss, grad = loss_and_grad(theta, X, yf, self.hidden_width, self.l2, self.activation)
                if not np.isfinite(loss) or not np.all(np.isfinite(grad)):
                    raise LearnerError("diverged")
                self.loss_history_.append(loss)
                theta = theta - self.learning_rate * grad
        if not np.all(np.isfinite(theta)):
            raise LearnerError("diverged")
        self.theta_ = theta
        return self

    def predict_proba(self, X) -> np.ndarray:
        X = self._check_X(X)
        W1, b1, w2, b2 = unpack(self.theta_, self.n_features_, self.hidden_width)
        a, _ = _act(X @ W1 + b1, self.activation)
        p = np.exp(-np.logaddexp(0.0, -(a @ w2 + b2)))
        return np.column_stack([1.0 - p, p])

    def state_dict(self) -> dict:
        return {"n_features": self.n_features_, "theta": self.theta_.tolist()}

    def load_state(self, state: dict) -> None:
        self.n_features_ = int(state["n_features"])
        self.theta_ = np.asarray(state["theta"], dtype=float)


def train_mlp(data: Dataset, **params) -> MLP:
    return MLP(**params).fit(data.X, data.y)
