"""Statistical primitives: Gaussian KDE, overlap coefficient, rank tests, binomial tails.

Special functions (regularized incomplete gamma and beta) are implemented
here so that p-values do not depend on the installed scipy version.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

log = logging.getLogger(__name__)

OVL_GRID_POINTS = 2048
OVL_EXTENSION = 4.0  # bandwidths added on each side of the pooled sample range
# scale boundaries: Medium < 0.70 <= High < 0.83 <= VeryHigh
OVL_HIGH = 0.70
OVL_VERY_HIGH = 0.83

_SQRT_2PI = math.sqrt(2.0 * math.pi)


class StatsError(ValueError):
    pass


# -- special functions --------------------------------------------------------

def _gamma_series(a: float, x: float) -> float:
    """Regularized lower incomplete gamma P(a, x) by series, for x < a + 1."""
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(1000):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * 1e-16:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_cf(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) by Lentz continued fraction, x >= a + 1."""
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 1000):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))


def gammaincc(a: float, x: float) -> float:
    """Regularized upper incomplete gamma function Q(a, x)."""
    if a <= 0:
        raise StatsError("gammaincc needs a > 0")
    if x <= 0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _gamma_series(a, x)
    return _gamma_cf(a, x)


def chi2_sf(x: float, df: int) -> float:
    if x <= 0:
        return 1.0
    return min(1.0, max(0.0, gammaincc(df / 2.0, x / 2.0)))


def _beta_cf(a: float, b: float, x: float) -> float:
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, 1000):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = tiny if abs(d) < tiny else d
        c = 1.0 + aa / c
        c = tiny if abs(c) < tiny else c
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = tiny if abs(d) < tiny else d
        c = 1.0 + aa / c
        c = tiny if abs(c) < tiny else c
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return h


def betainc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b)."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    lbt = math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b) + a * math.log(x) + b * math.log1p(-x)
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(lbt) * _beta_cf(a, b, x) / a
    return 1.0 - math.exp(lbt) * _beta_cf(b, a, 1.0 - x) / b


def t_sf_two_sided(t: float, df: float) -> float:
    """P(|T| >= |t|) for Student's t with ``df`` degrees of freedom."""
    if math.isinf(t):
        return 0.0
    return min(1.0, max(0.0, betainc(df / 2.0, 0.5, df / (df + t * t))))


def _log_binom_pmf(k: np.ndarray, n: int, p: float) -> np.ndarray:
    lg = np.vectorize(math.lgamma, otypes=[float])
    out = lg(n + 1.0) - lg(k + 1.0) - lg(n - k + 1.0)
    if p > 0:
        out = out + k * math.log(p)
    else:
        out = np.where(k == 0, out, -np.inf)
    if p < 1:
        out = out + (n - k) * math.log1p(-p)
    else:
        out = np.where(k == n, out, -np.inf)
    return out


def _logsumexp(v: np.ndarray) -> float:
    m = np.max(v)
    if not np.isfinite(m):
        return -math.inf
    return float(m + math.log(np.sum(np.exp(v - m))))


def binom_sf(k: int, n: int, p: float) -> float:
    """P(X >= k) for X ~ Binomial(n, p), summed in log space."""
    if not 0 <= k <= n:
        raise StatsError(f"need 0 <= k <= n, got k={k}, n={n}")
    if k == 0:
        return 1.0
    return min(1.0, math.exp(_logsumexp(_log_binom_pmf(np.arange(k, n + 1, dtype=float), n, p))))


def binom_cdf(k: int, n: int, p: float) -> float:
    """P(X <= k) for X ~ Binomial(n, p)."""
    if not 0 <= k <= n:
        raise StatsError(f"need 0 <= k <= n, got k={k}, n={n}")
    if k == n:
        return 1.0
    return min(1.0, math.exp(_logsumexp(_log_binom_pmf(np.arange(0, k + 1, dtype=float), n, p))))


# -- kernel density estimation ------------------------------------------------

def silverman_bandwidth(sample: np.ndarray) -> float:
    """0.9 * min(sd, IQR/1.34) * n^(-1/5), with fallbacks for degenerate spread.

    When the IQR is zero but the standard deviation is not (mostly-zero count
    features), the standard deviation alone is used. A constant sample gets
    max(1e-3, 1e-3 * |mean|).
    """
    x = np.asarray(sample, dtype=float)
    n = x.size
    sd = float(np.std(x, ddof=1))
    q75, q25 = np.percentile(x, [75, 25])
    spread = min(sd, (q75 - q25) / 1.34)
    if spread <= 0:
        spread = sd
    h = 0.9 * spread * n ** (-0.2)
    if h <= 0:
        h = max(1e-3, 1e-3 * abs(float(np.mean(x))))
    return h


@dataclass(frozen=True)
class DensityEstimate:
    sample: np.ndarray
    bandwidth: float
    kernel: str = "gaussian"

    def __call__(self, x) -> np.ndarray:
        return self.evaluate(x)

    def evaluate(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        u = (x.reshape(-1, 1) - self.sample.reshape(1, -1)) / self.bandwidth
        with np.errstate(over="ignore"):  # far-away points: u*u -> inf, exp -> 0
            dens = np.exp(-0.5 * u * u).sum(axis=1) / (self.sample.size * self.bandwidth * _SQRT_2PI)
        return dens.reshape(x.shape)

    def support(self, extension: float = OVL_EXTENSION) -> tuple[float, float]:
        pad = extension * self.bandwidth
        return float(self.sample.min() - pad), float(self.sample.max() + pad)


def kde_fit(sample: Sequence[float], bandwidth: float | None = None) -> DensityEstimate:
    x = np.asarray(sample, dtype=float).ravel()
    if x.size < 2:
        raise StatsError("KDE needs at least 2 observations")
    if not np.all(np.isfinite(x)):
        raise StatsError("KDE sample contains non-finite values")
    h = silverman_bandwidth(x) if bandwidth is None else float(bandwidth)
    if not h > 0:
        raise StatsError("bandwidth must be positive")
    return DensityEstimate(x, h)


def integrate_density(f: Callable, lo: float, hi: float, n: int = OVL_GRID_POINTS) -> float:
    grid = np.linspace(lo, hi, n)
    return float(np.trapezoid(f(grid), grid))


def ovl_scale(value: float) -> str:
    if value < OVL_HIGH:
        return "Medium"
    if value < OVL_VERY_HIGH:
        return "High"
    return "VeryHigh"


@dataclass(frozen=True)
class OvlResult:
    value: float
    grid_points: int
    feature_name: str = ""

    @property
    def scale(self) -> str:
        return ovl_scale(self.value)


def overlap_coefficient(f: Callable, g: Callable, lo: float, hi: float, n: int = OVL_GRID_POINTS) -> float:
    """Trapezoidal integral of min(f, g) over a uniform ``n``-point grid on [lo, hi], clamped to [0, 1]."""
    grid = np.linspace(lo, hi, n)
    val = float(np.trapezoid(np.minimum(f(grid), g(grid)), grid))
    return min(1.0, max(0.0, val))


def ovl(p: DensityEstimate, q: DensityEstimate, grid_points: int = OVL_GRID_POINTS,
        feature_name: str = "") -> OvlResult:
    lo_p, hi_p = p.support()
    lo_q, hi_q = q.support()
    value = overlap_coefficient(p, q, min(lo_p, lo_q), max(hi_p, hi_q), grid_points)
    return OvlResult(value, grid_points, feature_name)


def histogram_export(fake: Sequence[float], real: Sequence[float], bins: int = 20) -> dict[str, np.ndarray]:
    """Density-normalised histograms on shared equal-width bins, plus KDEs at bin centres."""
    fake = np.asarray(fake, dtype=float)
    real = np.asarray(real, dtype=float)
    pooled = np.concatenate([fake, real])
    lo, hi = float(pooled.min()), float(pooled.max())
    if hi <= lo:
        lo, hi = lo - 0.5, hi + 0.5
    edges = np.linspace(lo, hi, bins + 1)
    dens_f, _ = np.histogram(fake, bins=edges, density=True)
    dens_r, _ = np.histogram(real, bins=edges, density=True)
    centres = 0.5 * (edges[:-1] + edges[1:])
    return {
        "bin_left": edges[:-1],
        "bin_right": edges[1:],
        "density_fake": dens_f,
        "density_real": dens_r,
        "kde_fake": kde_fit(fake)(centres),
        "kde_real": kde_fit(real)(centres),
    }


# -- rank statistics ------------------------------------------------------------

def rankdata(x: Sequence[float]) -> np.ndarray:
    """Mid-ranks (1-based), ties receive the average of their positions."""
    x = np.asarray(x, dtype=float)
    order = np.argsort(x, kind="mergesort")
    xs = x[order]
    ranks = np.empty(x.size, dtype=float)
    i = 0
    n = x.size
    while i < n:
        j = i
        while j + 1 < n and xs[j + 1] == xs[i]:
            j += 1
        ranks[order[i:j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    test_name: str

    __test__ = False  # not a pytest class


def kruskal_wallis(group_a: Sequence[float], group_b: Sequence[float]) -> TestResult:
    """Kruskal-Wallis H test for two groups with tie correction."""
    a = np.asarray(group_a, dtype=float)
    b = np.asarray(group_b, dtype=float)
    if a.size < 1 or b.size < 1 or a.size + b.size < 3:
        raise StatsError("Kruskal-Wallis needs non-empty groups with at least 3 values in total")
    pooled = np.concatenate([a, b])
    n = pooled.size
    ranks = rankdata(pooled)
    _, counts = np.unique(pooled, return_counts=True)
    tie = 1.0 - float(np.sum(counts ** 3 - counts)) / (n ** 3 - n)
    if tie <= 0:
        return TestResult(0.0, 1.0, "kruskal-wallis")
    ra, rb = ranks[: a.size].sum(), ranks[a.size:].sum()
    h = 12.0 / (n * (n + 1)) * (ra ** 2 / a.size + rb ** 2 / b.size) - 3.0 * (n + 1)
    h = max(0.0, h / tie)
    return TestResult(h, chi2_sf(h, 1), "kruskal-wallis")


def _pearson(x: np.ndarray, y: np.ndarray) -> float:
    xc = x - x.mean()
    yc = y - y.mean()
    den = math.sqrt(float(np.dot(xc, xc)) * float(np.dot(yc, yc)))
    return float(np.dot(xc, yc)) / den


def spearman(x: Sequence[float], y: Sequence[float]) -> TestResult:
    """Spearman rank correlation with a two-sided t-approximation p-value."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size != y.size or x.size < 3:
        raise StatsError("Spearman needs two inputs of equal length >= 3")
    rx, ry = rankdata(x), rankdata(y)
    if np.all(rx == rx[0]) or np.all(ry == ry[0]):
        raise StatsError("constant input")
    rho = max(-1.0, min(1.0, _pearson(rx, ry)))
    df = x.size - 2
    if abs(rho) >= 1.0:
        p = 0.0
    else:
        t = rho * math.sqrt(df / ((1.0 - rho) * (1.0 + rho)))
        p = t_sf_two_sided(t, df)
    return TestResult(rho, p, "spearman")


def spearman_matrix(X: np.ndarray, names: Sequence[str] | None = None) -> np.ndarray:
    """Pairwise Spearman correlations of the columns of ``X``.

    Constant columns get zero off-diagonal entries; the diagonal is always 1.
    """
    X = np.asarray(X, dtype=float)
    if X.shape[0] < 3:
        raise StatsError("Spearman matrix needs at least 3 rows")
    d = X.shape[1]
    ranks = np.column_stack([rankdata(X[:, j]) for j in range(d)]) if d else np.empty((X.shape[0], 0))
    const = np.all(ranks == ranks[0:1, :], axis=0)
    for j in np.flatnonzero(const):
        log.warning("constant column %s in Spearman matrix; correlations set to 0",
                    names[j] if names is not None else j)
    out = np.eye(d)
    for i in range(d):
        for j in range(i + 1, d):
            r = 0.0 if const[i] or const[j] else _pearson(ranks[:, i], ranks[:, j])
            out[i, j] = out[j, i] = r
    return out
