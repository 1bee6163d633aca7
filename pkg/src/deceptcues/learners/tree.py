"""Decision trees and random forests with impurity-decrease feature importance.

The impurity decrease of a split of node ``t`` into ``t_L`` and ``t_R`` is

    delta_i(s, t) = i(t) - p_L * i(t_L) - p_R * i(t_R)

and a feature's importance in one tree is the sum of ``p(t) * delta_i`` over the
nodes split on it, with ``p(t) = N_t / N``. Forest importance averages that
over trees and normalises to sum to one.

Two child weightings are supported. ``"node"`` uses ``p_L = N_L / N_t``: the
weighted decreases then telescope, so the per-tree total equals
``i(root) - sum_leaves p(leaf) i(leaf)``. ``"global"`` uses ``p_L = N_L / N``
(the tree's sample count), which selects identical splits but gives different
importance magnitudes below the root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _tree_core
from .base import Classifier, Dataset, check_training_data

CRITERIA = {"gini": _tree_core.GINI, "entropy": _tree_core.ENTROPY}
WEIGHTINGS = ("node", "global")


def impurity(counts, criterion: str = "gini") -> float:
    """Gini or base-2 entropy impurity of a vector of class counts."""
    counts = np.asarray(counts, dtype=float)
    n = counts.sum()
    if n == 0:
        return 0.0
    p = counts / n
    if criterion == "gini":
        return float(1.0 - np.sum(p * p))
    if criterion == "entropy":
        p = p[p > 0]
        return float(-np.sum(p * np.log2(p)))
    raise ValueError(f"unknown impurity criterion {criterion!r}")


def impurity_decrease(parent_counts, left_counts, right_counts, criterion: str = "gini",
                      n_total: int | None = None) -> float:
    """Impurity decrease of one split.

    ``n_total`` is the denominator of the child weights; by default the
    parent's own sample count (per-node weighting). Pass the tree's sample
    count for global weighting. Returns 0 for a split with an empty child.
    """
    parent = np.asarray(parent_counts, dtype=float)
    lc = np.asarray(left_counts, dtype=float)
    rc = np.asarray(right_counts, dtype=float)
    if lc.sum() == 0 or rc.sum() == 0:
        return 0.0
    if not np.allclose(lc + rc, parent):
        raise ValueError("children do not partition the parent")
    n = parent.sum() if n_total is None else float(n_total)
    return (impurity(parent, criterion)
            - lc.sum() / n * impurity(lc, criterion)
            - rc.sum() / n * impurity(rc, criterion))


class TreeNode(NamedTuple):
    index: int
    feature: int
    threshold: float
    left: int
    right: int
    n_samples: int
    fraction: float
    impurity: float
    class_counts: tuple[int, int]

    @property
    def is_leaf(self) -> bool:
        return self.feature < 0


def _resolve_max_features(max_features, n_features: int) -> int:
    if max_features is None:
        return n_features
    if max_features == "sqrt":
        return max(1, int(math.sqrt(n_features)))
    if max_features == "log2":
        return max(1, int(math.log2(n_features)))
    if isinstance(max_features, float):
        return max(1, int(max_features * n_features))
    return max(1, min(int(max_features), n_features))


class DecisionTree(Classifier):
    kind = "decision_tree"

    def __init__(self, max_depth: int | None = None, min_samples_split: int = 2, min_samples_leaf: int = 1,
                 criterion: str = "gini", max_features=None, weighting: str = "node", random_state: int = 0):
        if criterion not in CRITERIA:
            raise ValueError(f"unknown impurity criterion {criterion!r}")
        if weighting not in WEIGHTINGS:
            raise ValueError(f"unknown weighting {weighting!r}")
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.min_samples_leaf = min_samples_leaf
        self.criterion = criterion
        self.max_features = max_features
        self.weighting = weighting
        self.random_state = random_state

    def get_params(self) -> dict:
        return {
            "max_depth": self.max_depth,
            "min_samples_split": self.min_samples_split,
            "min_samples_leaf": self.min_samples_leaf,
            "criterion": self.criterion,
            "max_features": self.max_features,
            "weighting": self.weighting,
            "random_state": self.random_state,
        }

    def fit(self, X, y, samples=None) -> "DecisionTree":
        """Grow the tree on rows ``samples`` of X (default: all rows once).

        ``samples`` may repeat indices, as for a bootstrap draw.
        """
        X, y = check_training_data(X, y)
        if samples is None:
            samples = np.arange(X.shape[0], dtype=np.int64)
        samples = np.asarray(samples, dtype=np.int64)
        self.n_features_ = X.shape[1]
        seed = int(self.random_state) % (2**31 - 1)
        (self.feature_, self.threshold_, self.left_, self.right_, count0, count1,
         self.impurity_, self.depth_) = _tree_core.grow_tree(
            np.ascontiguousarray(X), y, samples,
            -1 if self.max_depth is None else int(self.max_depth),
            int(self.min_samples_split), int(self.min_samples_leaf),
            _resolve_max_features(self.max_features, X.shape[1]),
            CRITERIA[self.criterion], seed,
        )
        self.counts_ = np.column_stack([count0, count1])
        return self

    # -- structure ---------------------------------------------------------

    @property
    def n_nodes(self) -> int:
        return int(self.feature_.shape[0])

    @property
    def n_samples_(self) -> np.ndarray:
        return self.counts_.sum(axis=1)

    def node(self, i: int) -> TreeNode:
        n = self.n_samples_
        return TreeNode(i, int(self.feature_[i]), float(self.threshold_[i]), int(self.left_[i]),
                        int(self.right_[i]), int(n[i]), float(n[i] / n[0]), float(self.impurity_[i]),
                        (int(self.counts_[i, 0]), int(self.counts_[i, 1])))

    def nodes(self) -> list[TreeNode]:
        return [self.node(i) for i in range(self.n_nodes)]

    @property
    def depth(self) -> int:
        return int(self.depth_.max())

    def impurity_decreases(self, weighting: str | None = None) -> np.ndarray:
        """Delta-i per node (0 at leaves)."""
        weighting = weighting or self.weighting
        n = self.n_samples_.astype(float)
        out = np.zeros(self.n_nodes)
        internal = np.flatnonzero(self.feature_ >= 0)
        lc, rc = self.left_[internal], self.right_[internal]
        denom = n[internal] if weighting == "node" else np.full(internal.size, n[0])
        out[internal] = (self.impurity_[internal]
                         - n[lc] / denom * self.impurity_[lc]
                         - n[rc] / denom * self.impurity_[rc])
        return out

    def weighted_decreases(self, weighting: str | None = None) -> np.ndarray:
        """p(t) * delta_i(s_t, t) per node."""
        n = self.n_samples_.astype(float)
        return n / n[0] * self.impurity_decreases(weighting)

    def raw_importances(self, weighting: str | None = None) -> np.ndarray:
        """Unnormalised per-feature sum of p(t) * delta_i over this tree's splits."""
        w = self.weighted_decreases(weighting)
        internal = self.feature_ >= 0
        return np.bincount(self.feature_[internal], weights=w[internal], minlength=self.n_features_)

    @property
    def feature_importances_(self) -> np.ndarray:
        raw = self.raw_importances()
        total = raw.sum()
        return raw / total if total > 0 else raw

    # -- prediction --------------------------------------------------------

    def apply(self, X) -> np.ndarray:
        X = self._check_X(X)
        return _tree_core.apply_tree(np.ascontiguousarray(X), self.feature_, self.threshold_,
                                     self.left_, self.right_)

    def predict_proba(self, X) -> np.ndarray:
        leaves = self.apply(X)
        counts = self.counts_[leaves].astype(float)
        return counts / counts.sum(axis=1, keepdims=True)

    # -- serialisation -----------------------------------------------------

    def state_dict(self) -> dict:
        return {
            "n_features": self.n_features_,
            "feature": self.feature_.tolist(),
            "threshold": self.threshold_.tolist(),
            "left": self.left_.tolist(),
            "right": self.right_.tolist(),
            "counts": self.counts_.tolist(),
            "impurity": self.impurity_.tolist(),
            "depth": self.depth_.tolist(),
        }

    def load_state(self, state: dict) -> None:
        self.n_features_ = int(state["n_features"])
        self.feature_ = np.asarray(state["feature"], dtype=np.int64)
        self.threshold_ = np.asarray(state["threshold"], dtype=float)
        self.left_ = np.asarray(state["left"], dtype=np.int64)
        self.right_ = np.asarray(state["right"], dtype=np.int64)
        self.counts_ = np.asarray(state["counts"], dtype=np.int64).reshape(-1, 2)
        self.impurity_ = np.asarray(state["impurity"], dtype=float)
        self.depth_ = np.asarray(state["depth"], dtype=np.int64)


def tree_seed(master: int, index: int) -> tuple[np.ndarray, int]:
    """Bootstrap generator and tree seed for tree ``index`` of a forest."""
    rng = np.random.default_rng(np.random.SeedSequence([int(master), int(index)]))
    return rng, int(rng.integers(0, 2**31 - 1))


class RandomForest(Classifier):
    kind = "random_forest"

    def __init__(self, n_trees: int = 100, max_depth: int | None = None, min_samples_split: int = 2,
                 min_samples_leaf: int = 1, criterion: str = "gini", max_features="sqrt",
                 bootstrap: bool = True, weighting: str = "node", random_state: int = 0):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.min_samples_leaf = min_samples_leaf
        self.criterion = criterion
        self.max_features = max_features
        self.bootstrap = bootstrap
        self.weighting = weighting
        self.random_state = random_state

    def get_params(self) -> dict:
        return {
            "n_trees": self.n_trees,
            "max_depth": self.max_depth,
            "min_samples_split": self.min_samples_split,
            "min_samples_leaf": self.min_samples_leaf,
            "criterion": self.criterion,
            "max_features": self.max_features,
            "bootstrap": self.bootstrap,
            "weighting": self.weighting,
            "random_state": self.random_state,
        }

    def _tree_params(self) -> dict:
        return {
            "max_depth": self.max_depth,
            "min_samples_split": self.min_samples_split,
            "min_samples_leaf": self.min_samples_leaf,
            "criterion": self.criterion,
            "max_features": self.max_features,
            "weighting": self.weighting,
        }

    def fit(self, X, y) -> "RandomForest":
        X, y = check_training_data(X, y)
        X = np.ascontiguousarray(X)
        n = X.shape[0]
        self.n_features_ = X.shape[1]
        self.trees_ = []
        self.tree_seeds_ = []
        for t in range(self.n_trees):
            rng, seed = tree_seed(self.random_state, t)
            samples = rng.integers(0, n, n) if self.bootstrap else np.arange(n)
            tree = DecisionTree(**self._tree_params(), random_state=seed).fit(X, y, samples)
            self.trees_.append(tree)
            self.tree_seeds_.append(seed)
        return self

    def raw_importances(self) -> np.ndarray:
        """Mean over trees of the per-tree sums of p(t) * delta_i."""
        return np.mean([t.raw_importances() for t in self.trees_], axis=0)

    @property
    def feature_importances_(self) -> np.ndarray:
        raw = self.raw_importances()
        total = raw.sum()
        return raw / total if total > 0 else np.zeros_like(raw)

    def predict_proba(self, X) -> np.ndarray:
        X = np.ascontiguousarray(self._check_X(X))
        return np.mean([t.predict_proba(X) for t in self.trees_], axis=0)

    def state_dict(self) -> dict:
        return {
            "n_features": self.n_features_,
            "tree_seeds": list(self.tree_seeds_),
            "trees": [t.state_dict() for t in self.trees_],
        }

    def load_state(self, state: dict) -> None:
        self.n_features_ = int(state["n_features"])
        self.tree_seeds_ = list(state["tree_seeds"])
        self.trees_ = []
        for seed, ts in zip(self.tree_seeds_, state["trees"]):
            tree = DecisionTree(**self._tree_params(), random_state=seed)
            tree.load_state(ts)
            self.trees_.append(tree)


def train_tree(data: Dataset, **params) -> DecisionTree:
    return DecisionTree(**params).fit(data.X, data.y)


def train_forest(data: Dataset, **params) -> RandomForest:
    return RandomForest(**params).fit(data.X, data.y)
