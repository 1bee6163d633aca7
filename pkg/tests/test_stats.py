import math

import numpy as np
import pytest
import scipy.stats as ss
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from deceptcues import stats
from deceptcues.stats import (
    StatsError,
    binom_cdf,
    binom_sf,
    chi2_sf,
    histogram_export,
    kde_fit,
    kruskal_wallis,
    overlap_coefficient,
    ovl,
    ovl_scale,
    rankdata,
    silverman_bandwidth,
    spearman,
    spearman_matrix,
)

finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False)


def normal_pdf(mu, sigma=1.0):
    return lambda x: np.exp(-0.5 * ((x - mu) / sigma) ** 2) / (sigma * math.sqrt(2 * math.pi))


class TestSpecialFunctions:
    @pytest.mark.parametrize("x", [0.0, 0.01, 0.5, 1.0, 3.841458820694124, 10.0, 40.0])
    def test_chi2_sf_against_scipy(self, x):
        assert chi2_sf(x, 1) == pytest.approx(ss.chi2.sf(x, 1), rel=1e-10, abs=1e-300)

    @pytest.mark.parametrize("a,b,x", [(0.5, 0.5, 0.3), (2.0, 5.0, 0.2), (10.0, 0.5, 0.99), (30.0, 30.0, 0.5)])
    def test_betainc_against_scipy(self, a, b, x):
        from scipy.special import betainc

        assert stats.betainc(a, b, x) == pytest.approx(betainc(a, b, x), rel=1e-10)

    def test_binom_edges(self):
        assert binom_sf(0, 10, 0.5) == 1.0
        assert binom_sf(10, 10, 0.5) == pytest.approx(2.0 ** -10, rel=1e-12)

    def test_binom_sf_exact_sum(self):
        from fractions import Fraction

        exact = sum(Fraction(math.comb(100, j), 2 ** 100) for j in range(60, 101))
        assert binom_sf(60, 100, 0.5) == pytest.approx(float(exact), rel=1e-12)

    def test_binom_cdf_against_scipy(self):
        for k in (0, 3, 30, 50, 97, 100):
            assert binom_cdf(k, 100, 0.5) == pytest.approx(ss.binom.cdf(k, 100, 0.5), rel=1e-9)

    def test_binom_tail_far_out(self):
        # log-space keeps tiny tails accurate
        assert binom_sf(98, 100, 0.5) == pytest.approx(ss.binom.sf(97, 100, 0.5), rel=1e-9)
        assert binom_sf(98, 100, 0.5) < 0.05 / 15

    def test_binom_rejects_bad_k(self):
        with pytest.raises(StatsError):
            binom_sf(11, 10, 0.5)


class TestKDE:
    def test_normalization(self):
        rng = np.random.default_rng(0)
        f = kde_fit(rng.normal(size=100))
        lo, hi = f.support()
        assert stats.integrate_density(f, lo, hi) == pytest.approx(1.0, abs=1e-3)

    def test_constant_sample_peaks_at_value(self):
        f = kde_fit([5.0, 5.0, 5.0])
        xs = np.linspace(4.9, 5.1, 201)
        assert xs[np.argmax(f(xs))] == pytest.approx(5.0)
        assert f.bandwidth == pytest.approx(5e-3)

    def test_two_point_direct_sum(self):
        f = kde_fit([0.0, 1.0])
        h = f.bandwidth
        # sd of {0,1} with ddof=1 is 1/sqrt(2); IQR is 0.5 so IQR/1.34 is smaller
        assert h == pytest.approx(0.9 * (0.5 / 1.34) * 2 ** -0.2)
        phi = lambda u: math.exp(-0.5 * u * u) / math.sqrt(2 * math.pi)
        expected = (phi(0.5 / h) + phi(-0.5 / h)) / (2 * h)
        assert f(0.5) == pytest.approx(expected, rel=1e-12)

    def test_matches_scipy_gaussian_kde_with_same_bandwidth(self):
        rng = np.random.default_rng(3)
        x = rng.gamma(2.0, size=60)
        f = kde_fit(x)
        ref = ss.gaussian_kde(x, bw_method=f.bandwidth / x.std(ddof=1))
        grid = np.linspace(-1, 10, 50)
        np.testing.assert_allclose(f(grid), ref(grid), rtol=1e-10)

    def test_iqr_zero_falls_back_to_sd(self):
        x = np.array([0.0] * 18 + [1.0, 3.0])
        assert silverman_bandwidth(x) == pytest.approx(0.9 * x.std(ddof=1) * 20 ** -0.2)

    def test_too_small(self):
        with pytest.raises(StatsError):
            kde_fit([1.0])

    @settings(max_examples=50, deadline=None)
    @given(st.lists(finite, min_size=2, max_size=30), finite, finite)
    def test_shift_equivariance(self, sample, c, x):
        # the shift must not round the sample's spread away
        assume(np.ptp(sample) > 1e-6 * (abs(c) + np.max(np.abs(sample)) + 1.0))
        a = kde_fit(sample)
        b = kde_fit(np.asarray(sample) + c)
        # bandwidths agree up to rounding of the shifted sample
        b = stats.DensityEstimate(b.sample, a.bandwidth)
        assert b(x + c) == pytest.approx(a(x), rel=1e-9, abs=1e-12)


class TestOVL:
    def test_identical(self):
        # the +-4h grid drops about 2*Phi(-4)/N of mass, below 1e-6 once N >= 64
        rng = np.random.default_rng(1)
        x = rng.normal(size=200)
        assert ovl(kde_fit(x), kde_fit(x)).value == pytest.approx(1.0, abs=1e-6)

    def test_disjoint(self):
        a = kde_fit(np.linspace(0, 1, 20))
        b = kde_fit(np.linspace(100, 101, 20))
        assert ovl(a, b).value < 1e-6

    def test_closed_form_gaussians(self):
        val = overlap_coefficient(normal_pdf(0.0), normal_pdf(1.0), -4.0, 5.0)
        assert val == pytest.approx(2 * ss.norm.cdf(-0.5), abs=0.005)

    @settings(max_examples=30, deadline=None)
    @given(st.lists(finite, min_size=2, max_size=20), st.lists(finite, min_size=2, max_size=20))
    def test_symmetric_and_bounded(self, a, b):
        p, q = kde_fit(a), kde_fit(b)
        v1, v2 = ovl(p, q).value, ovl(q, p).value
        assert v1 == v2
        assert 0.0 <= v1 <= 1.0

    @pytest.mark.parametrize("value,label", [(0.5, "Medium"), (0.6999, "Medium"), (0.70, "High"),
                                             (0.8299, "High"), (0.83, "VeryHigh"), (1.0, "VeryHigh")])
    def test_scale(self, value, label):
        assert ovl_scale(value) == label
        assert stats.OvlResult(value, 2048).scale == label

    def test_histogram_normalised(self):
        rng = np.random.default_rng(2)
        h = histogram_export(rng.normal(size=55), rng.normal(1, 2, size=55))
        width = h["bin_right"] - h["bin_left"]
        assert len(width) == 20
        assert np.sum(h["density_fake"] * width) == pytest.approx(1.0, abs=1e-6)
        assert np.sum(h["density_real"] * width) == pytest.approx(1.0, abs=1e-6)


class TestRanks:
    def test_midranks(self):
        np.testing.assert_array_equal(rankdata([10, 20, 10, 30]), [1.5, 3, 1.5, 4])

    @settings(max_examples=50)
    @given(st.lists(st.integers(-5, 5), min_size=1, max_size=30))
    def test_against_scipy(self, x):
        np.testing.assert_array_equal(rankdata(x), ss.rankdata(x))


class TestKruskalWallis:
    def test_identical_groups(self):
        r = kruskal_wallis([1, 2, 3], [1, 2, 3])
        assert r.statistic == pytest.approx(0.0, abs=1e-12)
        assert r.p_value == pytest.approx(1.0)

    def test_separated_groups_hand_value(self):
        # ranks 1..6: R_a = 6, R_b = 15; H = 12/42 * (36/3 + 225/3) - 21 = 27/7
        r = kruskal_wallis([1, 2, 3], [10, 11, 12])
        assert r.statistic == pytest.approx(27 / 7, rel=1e-12)
        assert r.p_value == pytest.approx(0.0495, abs=5e-5)

    def test_tie_correction_by_hand(self):
        # pooled {1,1,1,2,2,2}: mid-ranks 2 and 5; R_a = 2+2+5 = 9, R_b = 2+5+5 = 12
        h_raw = 12 / 42 * (81 / 3 + 144 / 3) - 21
        tie = 1 - (2 * (27 - 3)) / (216 - 6)
        r = kruskal_wallis([1, 1, 2], [1, 2, 2])
        assert r.statistic == pytest.approx(h_raw / tie, rel=1e-12)
        assert r.statistic == pytest.approx(ss.kruskal([1, 1, 2], [1, 2, 2]).statistic, rel=1e-12)

    def test_all_identical_values(self):
        r = kruskal_wallis([4, 4], [4, 4, 4])
        assert (r.statistic, r.p_value) == (0.0, 1.0)

    def test_against_scipy(self):
        rng = np.random.default_rng(5)
        a, b = rng.poisson(3, 40), rng.poisson(4, 35)
        ref = ss.kruskal(a, b)
        r = kruskal_wallis(a, b)
        assert r.statistic == pytest.approx(ref.statistic, rel=1e-10)
        assert r.p_value == pytest.approx(ref.pvalue, rel=1e-8)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.integers(-20, 20), min_size=2, max_size=15), st.lists(st.integers(-20, 20), min_size=2,
                                                                              max_size=15))
    def test_monotone_invariance(self, a, b):
        f = lambda v: np.exp(np.asarray(v, dtype=float) / 7.0)
        assert kruskal_wallis(f(a), f(b)).statistic == pytest.approx(kruskal_wallis(a, b).statistic, rel=1e-9,
                                                                      abs=1e-12)


class TestSpearman:
    def test_identity(self):
        assert spearman([1, 2, 3, 4], [1, 2, 3, 4]).statistic == 1.0

    def test_reversed(self):
        assert spearman([1, 2, 3, 4], [9, 7, 5, 1]).statistic == -1.0

    def test_hand_value(self):
        # sum d^2 = 4, rho = 1 - 6*4/(5*24) = 0.8
        assert spearman([1, 2, 3, 4, 5], [1, 3, 2, 5, 4]).statistic == pytest.approx(0.8)

    def test_against_scipy_with_ties(self):
        rng = np.random.default_rng(9)
        x, y = rng.integers(0, 5, 30), rng.integers(0, 5, 30)
        ref = ss.spearmanr(x, y)
        r = spearman(x, y)
        assert r.statistic == pytest.approx(ref.statistic, rel=1e-12)
        assert r.p_value == pytest.approx(ref.pvalue, rel=1e-8)

    def test_constant_input(self):
        with pytest.raises(StatsError, match="constant input"):
            spearman([1, 1, 1], [1, 2, 3])

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.tuples(st.integers(-50, 50), st.integers(-50, 50)), min_size=3, max_size=20))
    def test_monotone_invariance(self, pairs):
        x = np.array([p[0] for p in pairs], float)
        y = np.array([p[1] for p in pairs], float)
        if len(set(x)) < 2 or len(set(y)) < 2:
            return
        a = spearman(x, y).statistic
        b = spearman(x ** 3, np.exp(y / 20)).statistic
        assert b == pytest.approx(a, abs=1e-12)


class TestSpearmanMatrix:
    def test_symmetric_unit_diagonal(self):
        rng = np.random.default_rng(4)
        X = rng.normal(size=(30, 5))
        M = spearman_matrix(X)
        np.testing.assert_allclose(M, M.T)
        np.testing.assert_array_equal(np.diag(M), 1.0)
        np.testing.assert_allclose(M, ss.spearmanr(X).statistic, atol=1e-12)

    def test_duplicated_column(self):
        rng = np.random.default_rng(4)
        x = rng.normal(size=20)
        M = spearman_matrix(np.column_stack([x, x, rng.normal(size=20)]))
        assert M[0, 1] == pytest.approx(1.0)

    def test_constant_column_zeroed(self, caplog):
        X = np.column_stack([np.arange(5.0), np.ones(5), np.arange(5.0) ** 2])
        M = spearman_matrix(X, ["a", "b", "c"])
        assert M[1, 0] == M[0, 1] == M[1, 2] == 0.0
        assert M[1, 1] == 1.0
        assert "constant column b" in caplog.text
