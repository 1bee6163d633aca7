"""Classification metrics, stratified cross-validation, grid search and the
per-feature-subset experiment over nested RFE sets."""

from __future__ import annotations

import copy
import csv
import io
import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .features import FeatureMatrix
from .learners import Classifier, DimensionError, LearnerError, make_classifier

log = logging.getLogger(__name__)

DEFAULT_CLASSIFIERS = ("dt", "rf", "lr", "nb", "mlp")
C_GRID = tuple(float(c) for c in np.logspace(-4, 4, 9))
DEFAULT_GRIDS: dict[str, dict[str, list]] = {
    "dt": {"max_depth": [2, 4, 8, None]},
    "rf": {"n_trees": [100, 300], "max_depth": [4, None]},
    "lr": {"C": list(C_GRID)},
    "nb": {},
    "mlp": {"hidden_width": [4, 8, 16], "learning_rate": [0.01, 0.1]},
}
CLASSIFIER_LABELS = {"dt": "DTC", "rf": "RF", "lr": "LR", "nb": "NB", "mlp": "MLP"}

# exceptions that disqualify a grid point rather than abort the search
TRAINER_ERRORS = (LearnerError, FloatingPointError, ValueError, np.linalg.LinAlgError)


# -- metrics ------------------------------------------------------------------

@dataclass(frozen=True)
class Metrics:
    accuracy: float
    precision: float
    recall: float
    f1: float
    tp: int
    tn: int
    fp: int
    fn: int
    degenerate: tuple[str, ...] = ()

    def as_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "tp": self.tp,
            "tn": self.tn,
            "fp": self.fp,
            "fn": self.fn,
            "degenerate": list(self.degenerate),
        }


def compute_metrics(y_true, y_pred, positive: int = 1) -> Metrics:
    """Confusion counts and accuracy/precision/recall/F1; undefined ratios become 0
    and are named in ``degenerate``."""
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.shape != y_pred.shape or y_true.size == 0:
        raise ValueError("y_true and y_pred must be non-empty and of equal length")
    t = y_true == positive
    p = y_pred == positive
    tp = int(np.sum(t & p))
    tn = int(np.sum(~t & ~p))
    fp = int(np.sum(~t & p))
    fn = int(np.sum(t & ~p))
    flags = []
    precision = tp / (tp + fp) if tp + fp else 0.0
    if tp + fp == 0:
        flags.append("precision")
    recall = tp / (tp + fn) if tp + fn else 0.0
    if tp + fn == 0:
        flags.append("recall")
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    if precision + recall == 0:
        flags.append("f1")
    return Metrics((tp + tn) / y_true.size, precision, recall, f1, tp, tn, fp, fn, tuple(flags))


# -- folds --------------------------------------------------------------------

def stratified_kfold(y, k: int, seed: int = 0) -> list[tuple[np.ndarray, np.ndarray]]:
    """Stratified folds: each class is shuffled, classes are concatenated, and
    position ``j`` of the concatenation goes to fold ``j mod k``.

    Fold sizes differ by at most one and each fold's class counts are within
    one of the global proportion.
    """
    y = np.asarray(getattr(y, "y", y))
    if k < 2:
        raise ValueError("k must be at least 2")
    classes, counts = np.unique(y, return_counts=True)
    if np.any(counts < k):
        small = classes[np.argmin(counts)]
        raise ValueError(f"class {small!r} has {counts.min()} members, fewer than k={k}")
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 0x5F0]))
    order = np.concatenate([rng.permutation(np.flatnonzero(y == c)) for c in classes])
    fold_of = np.empty(y.size, dtype=np.int64)
    fold_of[order] = np.arange(y.size) % k
    all_idx = np.arange(y.size)
    return [(all_idx[fold_of != f], all_idx[fold_of == f]) for f in range(k)]


class Standardizer:
    """Zero-mean, unit-variance scaling; constant columns map to zero."""

    def fit(self, X) -> "Standardizer":
        X = np.asarray(X, dtype=float)
        self.mean_ = X.mean(axis=0)
        sd = X.std(axis=0)
        self.scale_ = np.where(sd > 0, sd, 1.0)
        return self

    def transform(self, X) -> np.ndarray:
        return (np.asarray(X, dtype=float) - self.mean_) / self.scale_

    def fit_transform(self, X) -> np.ndarray:
        return self.fit(X).transform(X)


def derive_seed(*key: int) -> int:
    return int(np.random.SeedSequence([int(k) for k in key]).generate_state(1)[0] % (2**31 - 1))


# -- grid search ----------------------------------------------------------------

def grid_points(grid: dict[str, Sequence]) -> list[dict]:
    for name, values in grid.items():
        if len(values) == 0:
            raise ValueError(f"grid parameter {name!r} has no values")
    names = list(grid)
    return [dict(zip(names, combo)) for combo in itertools.product(*(grid[n] for n in names))]


@dataclass
class PointResult:
    params: dict
    fold_metrics: list[Metrics] = field(default_factory=list)
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None

    def mean(self, attr: str) -> float:
        return float(np.mean([getattr(m, attr) for m in self.fold_metrics]))


@dataclass
class GridSearchResult:
    classifier: str
    best_index: int
    points: list[PointResult]
    model: Classifier | None = None
    scaler: Standardizer | None = None

    @property
    def best(self) -> PointResult:
        return self.points[self.best_index]

    @property
    def best_params(self) -> dict:
        return self.best.params

    def summary(self) -> dict[str, float]:
        return {a: self.best.mean(a) for a in ("accuracy", "precision", "recall", "f1")}


def grid_search_cv(X, y, classifier: str, grid: dict[str, Sequence] | None = None, k: int = 10, seed: int = 0,
                   folds: list[tuple[np.ndarray, np.ndarray]] | None = None, standardize: bool = True,
                   seed_key: Sequence[int] = (), refit: bool = True) -> GridSearchResult:
    """Pick the grid point with the best mean CV accuracy (first wins ties).

    A point whose trainer fails on any fold is disqualified. Learner seeds are
    derived from ``(seed, *seed_key, point, fold)``. With ``refit`` the winner
    is retrained on all rows.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=np.int64)
    grid = DEFAULT_GRIDS[classifier] if grid is None else grid
    points = grid_points(grid)
    if folds is None:
        folds = stratified_kfold(y, k, seed)
    results = []
    for pi, params in enumerate(points):
        res = PointResult(dict(params))
        for fi, (tr, te) in enumerate(folds):
            Xtr, Xte = X[tr], X[te]
            if standardize:
                sc = Standardizer().fit(Xtr)
                Xtr, Xte = sc.transform(Xtr), sc.transform(Xte)
            try:
                model = make_classifier(classifier, params, derive_seed(seed, *seed_key, pi, fi))
                model.fit(Xtr, y[tr])
                pred = model.predict(Xte)
            except TRAINER_ERRORS as exc:
                if isinstance(exc, DimensionError):
                    raise
                res.error = f"fold {fi}: {type(exc).__name__}: {exc}"
                res.fold_metrics = []
                log.info("%s %s disqualified (%s)", classifier, params, res.error)
                break
            res.fold_metrics.append(compute_metrics(y[te], pred))
        results.append(res)
    valid = [i for i, r in enumerate(results) if r.ok]
    if not valid:
        raise LearnerError(f"every grid point failed for {classifier}")
    best = valid[0]
    for i in valid[1:]:
        if results[i].mean("accuracy") > results[best].mean("accuracy"):
            best = i
    out = GridSearchResult(classifier, best, results)
    if refit:
        scaler = Standardizer().fit(X) if standardize else None
        Xs = scaler.transform(X) if scaler else X
        model = make_classifier(classifier, points[best], derive_seed(seed, *seed_key, best, len(folds)))
        out.model = model.fit(Xs, y)
        out.scaler = scaler
    return out


# -- experiment -----------------------------------------------------------------

@dataclass
class Cell:
    accuracy: float
    f1: float
    precision: float
    recall: float
    params: dict
    folds: list[dict] = field(default_factory=list)


@dataclass
class EvalGrid:
    classifiers: tuple[str, ...]
    subsets: list[list[str]]
    cells: dict[tuple[str, int], Cell]
    k: int
    seed: int

    @property
    def sizes(self) -> list[int]:
        return [len(s) for s in self.subsets]

    def maxima(self) -> dict[str, dict]:
        """Per classifier: best accuracy/F1 and the smallest subset size attaining it."""
        out = {}
        for c in self.classifiers:
            acc = [(self.cells[(c, n)].accuracy, n) for n in self.sizes]
            f1 = [(self.cells[(c, n)].f1, n) for n in self.sizes]
            best_acc = max(a for a, _ in acc)
            best_f1 = max(f for f, _ in f1)
            out[c] = {
                "max_accuracy": best_acc,
                "n_features_accuracy": min(n for a, n in acc if a == best_acc),
                "max_f1": best_f1,
                "n_features_f1": min(n for f, n in f1 if f == best_f1),
            }
        return out

    def averages(self) -> dict[str, dict]:
        return {
            c: {
                "accuracy": float(np.mean([self.cells[(c, n)].accuracy for n in self.sizes])),
                "f1": float(np.mean([self.cells[(c, n)].f1 for n in self.sizes])),
            }
            for c in self.classifiers
        }

    def best_overall(self, max_features: int | None = None) -> tuple[str, int, float]:
        best = None
        for c in self.classifiers:
            for n in self.sizes:
                if max_features is not None and n > max_features:
                    continue
                acc = self.cells[(c, n)].accuracy
                if best is None or acc > best[2]:
                    best = (c, n, acc)
        return best

    def grid_csv(self) -> str:
        buf = io.StringIO(newline="")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n_features"] + [f"accuracy_{c}" for c in self.classifiers] + [f"f1_{c}" for c in self.classifiers])
        for n in self.sizes:
            w.writerow([n] + [f"{self.cells[(c, n)].accuracy:.6f}" for c in self.classifiers]
                       + [f"{self.cells[(c, n)].f1:.6f}" for c in self.classifiers])
        avg = self.averages()
        w.writerow(["Average"] + [f"{avg[c]['accuracy']:.6f}" for c in self.classifiers]
                   + [f"{avg[c]['f1']:.6f}" for c in self.classifiers])
        return buf.getvalue()

    def max_csv(self) -> str:
        buf = io.StringIO(newline="")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["classifier", "max_accuracy", "n_features_accuracy", "max_f1", "n_features_f1"])
        for c, m in self.maxima().items():
            w.writerow([c, f"{m['max_accuracy']:.6f}", m["n_features_accuracy"], f"{m['max_f1']:.6f}",
                        m["n_features_f1"]])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "seed": self.seed,
            "classifiers": list(self.classifiers),
            "subsets": self.subsets,
            "cells": [
                {"classifier": c, "n_features": n, "accuracy": cell.accuracy, "f1": cell.f1,
                 "precision": cell.precision, "recall": cell.recall, "params": cell.params, "folds": cell.folds}
                for (c, n), cell in sorted(self.cells.items(), key=lambda kv: (self.classifiers.index(kv[0][0]), kv[0][1]))
            ],
            "maxima": self.maxima(),
            "averages": self.averages(),
        }


def run_experiment(matrix: FeatureMatrix, subsets: Iterable[Sequence[str]],
                   classifiers: Sequence[str] = DEFAULT_CLASSIFIERS, k: int = 10, seed: int = 42,
                   grids: dict[str, dict] | None = None,
                   progress: Callable[[str, int], None] | None = None) -> EvalGrid:
    """Grid-searched k-fold CV of every classifier on every feature subset.

    ``subsets`` is typically the nested RFE sets F_1..F_D. All cells share the
    same fold assignment.
    """
    grids = {**copy.deepcopy(DEFAULT_GRIDS), **(grids or {})}
    subsets = [list(s) for s in subsets]
    y = matrix.y
    folds = stratified_kfold(y, k, seed)
    cells = {}
    for ci, clf in enumerate(classifiers):
        for names in subsets:
            n = len(names)
            if progress:
                progress(clf, n)
            X = matrix.select(names).X
            res = grid_search_cv(X, y, clf, grids.get(clf, {}), k=k, seed=seed, folds=folds,
                                 seed_key=(ci, n), refit=False)
            best = res.best
            cells[(clf, n)] = Cell(
                accuracy=best.mean("accuracy"),
                f1=best.mean("f1"),
                precision=best.mean("precision"),
                recall=best.mean("recall"),
                params=best.params,
                folds=[m.as_dict() for m in best.fold_metrics],
            )
    return EvalGrid(tuple(classifiers), subsets, cells, k, seed)
