"""Feature selection: logistic-regression RFE, Boruta over random forests, RF
importance ranking, and the joined per-feature selection report."""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .evaluation import C_GRID, Standardizer, derive_seed, grid_search_cv
from .features import SPARSE_FEATURES, FeatureMatrix
from .learners import Dataset, RandomForest
from .stats import StatsError, binom_cdf, binom_sf, kde_fit, kruskal_wallis, ovl, ovl_scale, spearman

log = logging.getLogger(__name__)

RFE_CV_FOLDS = 5
RANKING_TREES = 500
# Shallow trees keep a noise column from collecting importance through deep,
# sample-specific splits that its freshly shuffled shadow cannot repeat.
BORUTA_FOREST = {"n_trees": 100, "max_depth": 3}


class SelectionError(ValueError):
    pass


def matrix_dataset(matrix: FeatureMatrix) -> Dataset:
    return Dataset(matrix.X, matrix.y, matrix.feature_names)


# -- RFE --------------------------------------------------------------------------

@dataclass
class RfeTrace:
    """Outcome of recursive feature elimination.

    ``eliminated`` lists features in removal order; ``survivors`` are the
    ``target_size`` features never removed. ``first_iteration[f]`` is the size
    of the smallest nested set containing ``f``.
    """

    feature_names: tuple[str, ...]
    eliminated: list[str]
    survivors: list[str]
    chosen_C: list[float | None] = field(default_factory=list)
    weights: list[dict[str, float]] = field(default_factory=list)

    @property
    def target_size(self) -> int:
        return len(self.survivors)

    @property
    def first_iteration(self) -> dict[str, int]:
        d = len(self.feature_names)
        out = {name: d - r for r, name in enumerate(self.eliminated)}
        out.update({name: self.target_size for name in self.survivors})
        return out

    def subset(self, i: int) -> list[str]:
        """The nested set F_i, best feature first."""
        d = len(self.feature_names)
        if i == 0:
            return []
        if not self.target_size <= i <= d:
            raise ValueError(f"F_{i} is not determined by this trace (sizes {self.target_size}..{d})")
        extra = list(reversed(self.eliminated))[: i - self.target_size]
        return list(self.survivors) + extra

    def sets(self) -> dict[int, list[str]]:
        out = {0: []}
        for i in range(self.target_size, len(self.feature_names) + 1):
            out[i] = self.subset(i)
        return out

    def to_json(self) -> dict:
        return {
            "feature_names": list(self.feature_names),
            "eliminated": self.eliminated,
            "survivors": self.survivors,
            "chosen_C": self.chosen_C,
            "weights": self.weights,
            "first_iteration": self.first_iteration,
        }

    @classmethod
    def from_json(cls, payload: dict) -> "RfeTrace":
        return cls(tuple(payload["feature_names"]), list(payload["eliminated"]), list(payload["survivors"]),
                   list(payload.get("chosen_C", [])), list(payload.get("weights", [])))


def _rfe_folds(y: np.ndarray) -> int:
    smallest = int(np.bincount(y, minlength=2).min())
    if smallest < 2:
        raise SelectionError("RFE needs at least two samples of each class")
    return min(RFE_CV_FOLDS, smallest)


def rfe(data: Dataset, target_size: int = 1, seed: int = 0, c_grid: Sequence[float] = C_GRID) -> RfeTrace:
    """Eliminate one feature per round by smallest |weight| of a tuned logistic
    regression until ``target_size`` features remain.

    Columns are standardised here as well, which is harmless if the caller
    already did so. A column that is constant is removed before any weighted
    elimination; ties in |weight| go to the lower column index.
    """
    d = data.n_features
    if not 1 <= target_size <= d:
        raise SelectionError(f"target_size must be in 1..{d}")
    X = Standardizer().fit_transform(data.X)
    y = data.y
    k = _rfe_folds(y)
    constant = np.all(data.X == data.X[0:1, :], axis=0)
    remaining = list(range(d))
    trace = RfeTrace(data.feature_names, [], [])
    rnd = 0
    while len(remaining) > target_size:
        const_left = [j for j in remaining if constant[j]]
        if const_left:
            drop = const_left[0]
            trace.chosen_C.append(None)
            trace.weights.append({})
        else:
            res = grid_search_cv(X[:, remaining], y, "lr", {"C": list(c_grid)}, k=k, seed=seed,
                                 seed_key=(0x4FE, rnd), standardize=False)
            w = np.abs(res.model.coef_)
            drop = remaining[int(np.argmin(w))]  # argmin returns the first minimum
            trace.chosen_C.append(float(res.best_params["C"]))
            trace.weights.append({data.feature_names[j]: float(c) for j, c in zip(remaining, res.model.coef_)})
        trace.eliminated.append(data.feature_names[drop])
        remaining.remove(drop)
        rnd += 1
    trace.survivors = [data.feature_names[j] for j in remaining]
    return trace


# -- Boruta -------------------------------------------------------------------------

class Zone(str, Enum):
    RELEVANT = "Relevant"
    TENTATIVE = "Tentative"
    NOT_RELEVANT = "NotRelevant"

    @property
    def scale(self) -> str:
        return {"Relevant": "High", "Tentative": "Medium", "NotRelevant": "Low"}[self.value]


def boruta_zone(hits: int, n: int, alpha: float = 0.05, n_features: int = 1) -> Zone:
    """Two-sided binomial decision with a Bonferroni-corrected threshold."""
    threshold = alpha / n_features
    if binom_sf(hits, n, 0.5) < threshold:
        return Zone.RELEVANT
    if binom_cdf(hits, n, 0.5) < threshold:
        return Zone.NOT_RELEVANT
    return Zone.TENTATIVE


@dataclass(frozen=True)
class BorutaVerdict:
    feature: str
    hits: int
    n_iterations: int
    zone: Zone


def shadow_matrix(X: np.ndarray, seed: int, iteration: int) -> np.ndarray:
    """Row-permuted copy of each column, one independent stream per column."""
    out = np.empty_like(X)
    for j in range(X.shape[1]):
        rng = np.random.default_rng(np.random.SeedSequence([int(seed), 0xB0, iteration, j]))
        out[:, j] = X[rng.permutation(X.shape[0]), j]
    return out


def boruta(data: Dataset, n_iterations: int = 100, alpha: float = 0.05, seed: int = 0,
           forest_params: dict | None = None) -> list[BorutaVerdict]:
    """Count, per feature, the iterations in which its forest importance beats
    the best shadow feature, then classify the counts into zones."""
    if n_iterations < 10:
        raise SelectionError("Boruta needs at least 10 iterations")
    params = {**BORUTA_FOREST, **(forest_params or {})}
    d = data.n_features
    hits = np.zeros(d, dtype=np.int64)
    for it in range(n_iterations):
        Xa = np.hstack([data.X, shadow_matrix(data.X, seed, it)])
        forest = RandomForest(**params, random_state=derive_seed(seed, 0xB1, it)).fit(Xa, data.y)
        imp = forest.raw_importances()
        hits += imp[:d] > imp[d:].max()
    return [BorutaVerdict(name, int(h), n_iterations, boruta_zone(int(h), n_iterations, alpha, d))
            for name, h in zip(data.feature_names, hits)]


# -- RF ranking ----------------------------------------------------------------------

def rank_by_rf_importance(data: Dataset, seed: int = 0, forest_params: dict | None = None) -> list[tuple[str, float]]:
    """Features with normalised forest importances, descending (ties by column order)."""
    params = {"n_trees": RANKING_TREES, **(forest_params or {})}
    forest = RandomForest(**params, random_state=derive_seed(seed, 0x1A)).fit(data.X, data.y)
    imp = forest.feature_importances_
    order = sorted(range(data.n_features), key=lambda j: (-imp[j], j))
    return [(data.feature_names[j], float(imp[j])) for j in order]


# -- report ---------------------------------------------------------------------------

@dataclass
class SelectionRow:
    feature: str
    rf_importance: float
    ovl: float
    ovl_scale: str
    kw_h: float
    kw_p: float
    rfe_first_iteration: int
    boruta_hits: int
    boruta_zone: str


@dataclass
class SelectionReport:
    rows: list[SelectionRow]
    rho_all: float
    rho_all_p: float
    rho_without_sparse: float
    rho_without_sparse_p: float
    excluded_sparse: tuple[str, ...]
    boruta_iterations: int
    seed: int
    rfe: RfeTrace | None = None

    def row(self, feature: str) -> SelectionRow:
        for r in self.rows:
            if r.feature == feature:
                return r
        raise KeyError(feature)

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "boruta_iterations": self.boruta_iterations,
            "spearman_importance_vs_ovl": {
                "all_features": {"rho": self.rho_all, "p_value": self.rho_all_p},
                "sparse_excluded": {"rho": self.rho_without_sparse, "p_value": self.rho_without_sparse_p,
                                    "excluded": list(self.excluded_sparse)},
            },
            "features": [asdict(r) for r in self.rows],
            "rfe": self.rfe.to_json() if self.rfe else None,
        }

    def to_csv(self) -> str:
        buf = io.StringIO(newline="")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["feature", "rf_significance", "appears_on_iteration", "boruta_hits", "boruta_scale", "ovl",
                    "scale", "kw_p"])
        for r in self.rows:
            w.writerow([r.feature, f"{r.rf_importance:.6f}", r.rfe_first_iteration, r.boruta_hits,
                        Zone(r.boruta_zone).scale, f"{r.ovl:.6f}", r.ovl_scale, f"{r.kw_p:.6g}"])
        return buf.getvalue()

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, payload: dict) -> "SelectionReport":
        rho = payload["spearman_importance_vs_ovl"]
        return cls(
            rows=[SelectionRow(**r) for r in payload["features"]],
            rho_all=rho["all_features"]["rho"],
            rho_all_p=rho["all_features"]["p_value"],
            rho_without_sparse=rho["sparse_excluded"]["rho"],
            rho_without_sparse_p=rho["sparse_excluded"]["p_value"],
            excluded_sparse=tuple(rho["sparse_excluded"]["excluded"]),
            boruta_iterations=payload["boruta_iterations"],
            seed=payload["seed"],
            rfe=RfeTrace.from_json(payload["rfe"]) if payload.get("rfe") else None,
        )


def feature_ovl(values: np.ndarray, y: np.ndarray, name: str = "") -> float:
    return ovl(kde_fit(values[y == 1]), kde_fit(values[y == 0]), feature_name=name).value


def _safe_spearman(x, y) -> tuple[float, float]:
    try:
        res = spearman(x, y)
    except StatsError as exc:
        log.warning("Spearman correlation undefined (%s)", exc)
        return float("nan"), float("nan")
    return res.statistic, res.p_value


def build_selection_report(data: Dataset, seed: int = 0, boruta_iterations: int = 100, alpha: float = 0.05,
                           sparse: Sequence[str] = SPARSE_FEATURES, forest_params: dict | None = None,
                           trace: RfeTrace | None = None) -> SelectionReport:
    """Join RF importance, OVL, Kruskal-Wallis, RFE and Boruta per feature.

    Rows are ordered by descending RF importance.
    """
    ranking = rank_by_rf_importance(data, seed=seed, forest_params=forest_params)
    if trace is None:
        trace = rfe(data, 1, seed=seed)
    first = trace.first_iteration
    verdicts = {v.feature: v for v in boruta(data, boruta_iterations, alpha, seed=seed)}
    y = data.y
    rows = []
    for name, imp in ranking:
        col = data.X[:, data.feature_names.index(name)]
        o = feature_ovl(col, y, name)
        kw = kruskal_wallis(col[y == 1], col[y == 0])
        v = verdicts[name]
        rows.append(SelectionRow(name, imp, o, ovl_scale(o), kw.statistic, kw.p_value, first[name], v.hits,
                                 v.zone.value))
    imp = np.array([r.rf_importance for r in rows])
    ov = np.array([r.ovl for r in rows])
    rho, p = _safe_spearman(imp, ov)
    keep = np.array([r.feature not in set(sparse) for r in rows])
    rho_s, p_s = _safe_spearman(imp[keep], ov[keep])
    return SelectionReport(rows, rho, p, rho_s, p_s, tuple(s for s in sparse if s in data.feature_names),
                           boruta_iterations, seed, trace)
