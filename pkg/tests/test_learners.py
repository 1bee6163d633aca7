import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import optimize

from deceptcues.learners import (
    MLP,
    DecisionTree,
    DimensionError,
    GaussianNB,
    LearnerError,
    LogisticRegression,
    RandomForest,
    impurity,
    impurity_decrease,
    make_classifier,
    model_from_dict,
    model_to_dict,
)
from deceptcues.learners import linear, mlp


def leaf_residual(tree: DecisionTree) -> float:
    """i(root) - sum over leaves of p(leaf) * i(leaf)."""
    nodes = tree.nodes()
    return nodes[0].impurity - sum(n.fraction * n.impurity for n in nodes if n.is_leaf)


def random_binary_data(rng, n=None, d=None):
    n = n or int(rng.integers(6, 40))
    d = d or int(rng.integers(1, 5))
    X = np.round(rng.normal(size=(n, d)), 1)
    y = rng.integers(0, 2, n)
    y[:2] = [0, 1]
    return X, y


class TestImpurity:
    def test_gini_perfect_split(self):
        assert impurity_decrease([4, 4], [4, 0], [0, 4], "gini") == pytest.approx(0.5)

    def test_entropy_perfect_split(self):
        assert impurity_decrease([4, 4], [4, 0], [0, 4], "entropy") == pytest.approx(1.0)

    @pytest.mark.parametrize("criterion", ["gini", "entropy"])
    def test_pure_parent(self, criterion):
        assert impurity_decrease([6, 0], [2, 0], [4, 0], criterion) == 0.0

    def test_empty_child_rejected(self):
        assert impurity_decrease([3, 3], [0, 0], [3, 3]) == 0.0

    def test_global_weighting(self):
        # node of 8 inside a tree of 16: children weights halve
        assert impurity_decrease([4, 4], [4, 0], [0, 4], n_total=16) == pytest.approx(0.5 - 0.0)
        assert impurity_decrease([4, 4], [3, 1], [1, 3], n_total=16) == pytest.approx(0.5 - 0.25 * 0.375 * 2)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 20), st.integers(0, 20), st.integers(0, 20), st.integers(0, 20),
           st.sampled_from(["gini", "entropy"]))
    def test_nonnegative(self, a, b, c, d, criterion):
        if a + b == 0 or c + d == 0:
            return
        assert impurity_decrease([a + c, b + d], [a, b], [c, d], criterion) >= -1e-12

    def test_impurity_values(self):
        assert impurity([1, 3]) == pytest.approx(0.375)
        assert impurity([1, 1], "entropy") == pytest.approx(1.0)
        with pytest.raises(ValueError):
            impurity([1, 1], "misclass")


class TestDecisionTree:
    def test_xor_needs_depth_two(self):
        X = np.array([[0, 0], [0, 1], [1, 0], [1, 1]] * 3, dtype=float)
        y = np.array([0, 1, 1, 0] * 3)
        tree = DecisionTree(max_depth=2).fit(X, y)
        np.testing.assert_array_equal(tree.predict(X), y)

    def test_separable_single_split(self):
        X = np.array([[0.1], [0.2], [0.3], [0.8], [0.9], [1.0]])
        y = np.array([0, 0, 0, 1, 1, 1])
        tree = DecisionTree().fit(X, y)
        assert tree.n_nodes == 3
        assert 0.3 <= tree.node(0).threshold < 0.8
        np.testing.assert_array_equal(tree.feature_importances_, [1.0])

    def test_root_split_matches_exhaustive_search(self):
        rng = np.random.default_rng(7)
        X = rng.integers(0, 5, size=(8, 3)).astype(float)
        y = np.array([0, 1, 0, 1, 1, 0, 1, 1])
        best = 0.0
        for j in range(3):
            values = np.unique(X[:, j])
            for lo, hi in itertools.pairwise(values):
                left = X[:, j] <= (lo + hi) / 2
                gain = impurity_decrease(np.bincount(y, minlength=2), np.bincount(y[left], minlength=2),
                                         np.bincount(y[~left], minlength=2))
                best = max(best, gain)
        tree = DecisionTree(max_depth=1).fit(X, y)
        assert tree.impurity_decreases()[0] == pytest.approx(best, abs=1e-12)

    def test_children_partition_parent(self):
        rng = np.random.default_rng(3)
        X, y = random_binary_data(rng, 60, 4)
        tree = DecisionTree().fit(X, y)
        for node in tree.nodes():
            if not node.is_leaf:
                kids = tree.node(node.left).n_samples + tree.node(node.right).n_samples
                assert kids == node.n_samples
                assert tree.impurity_decreases()[node.index] >= -1e-12

    def test_max_depth_respected(self):
        rng = np.random.default_rng(4)
        X, y = random_binary_data(rng, 80, 3)
        assert DecisionTree(max_depth=2).fit(X, y).depth <= 2

    def test_min_samples_leaf(self):
        rng = np.random.default_rng(5)
        X, y = random_binary_data(rng, 50, 2)
        tree = DecisionTree(min_samples_leaf=7).fit(X, y)
        assert min(n.n_samples for n in tree.nodes() if n.is_leaf) >= 7

    def test_deterministic(self):
        rng = np.random.default_rng(6)
        X, y = random_binary_data(rng, 50, 5)
        a = DecisionTree(max_features=2, random_state=11).fit(X, y)
        b = DecisionTree(max_features=2, random_state=11).fit(X, y)
        assert a.state_dict() == b.state_dict()

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10_000), st.sampled_from(["gini", "entropy"]))
    def test_importance_telescopes(self, seed, criterion):
        X, y = random_binary_data(np.random.default_rng(seed))
        tree = DecisionTree(criterion=criterion).fit(X, y)
        total = tree.weighted_decreases("node").sum()
        assert total == pytest.approx(leaf_residual(tree), abs=1e-10)
        assert tree.raw_importances().sum() == pytest.approx(total, abs=1e-12)

    def test_global_weighting_same_splits(self):
        rng = np.random.default_rng(8)
        X, y = random_binary_data(rng, 40, 3)
        a = DecisionTree(weighting="node").fit(X, y)
        b = DecisionTree(weighting="global").fit(X, y)
        np.testing.assert_array_equal(a.feature_, b.feature_)
        np.testing.assert_allclose(a.impurity_decreases()[0], b.impurity_decreases()[0])
        internal = a.feature_ >= 0
        # below the root the global form always subtracts less child impurity
        assert np.all(b.impurity_decreases()[internal] >= a.impurity_decreases()[internal] - 1e-12)

    def test_unknown_options(self):
        with pytest.raises(ValueError):
            DecisionTree(criterion="twoing")
        with pytest.raises(ValueError):
            DecisionTree(weighting="other")

    def test_column_mismatch(self):
        tree = DecisionTree().fit(np.eye(4), np.array([0, 1, 0, 1]))
        with pytest.raises(DimensionError):
            tree.predict(np.ones((2, 3)))


class TestRandomForest:
    def test_label_copy_dominates(self):
        rng = np.random.default_rng(0)
        y = np.repeat([0, 1], 55)
        X = np.column_stack([y.astype(float)] + [rng.normal(size=110) for _ in range(4)])
        imp = RandomForest(n_trees=50, random_state=1).fit(X, y).feature_importances_
        assert imp[0] > 0.8
        assert imp.sum() == pytest.approx(1.0)
        assert np.all(imp >= 0)

    def test_single_tree_without_bootstrap_equals_tree(self):
        rng = np.random.default_rng(2)
        X, y = random_binary_data(rng, 40, 3)
        forest = RandomForest(n_trees=1, bootstrap=False, max_features=None, random_state=5).fit(X, y)
        tree = DecisionTree(random_state=forest.tree_seeds_[0]).fit(X, y)
        np.testing.assert_allclose(forest.raw_importances(), tree.raw_importances())
        np.testing.assert_allclose(forest.predict_proba(X), tree.predict_proba(X))

    def test_no_split_gives_zero_importance(self):
        X = np.ones((6, 2))
        y = np.array([0, 1, 0, 1, 0, 1])
        np.testing.assert_array_equal(RandomForest(n_trees=3).fit(X, y).feature_importances_, [0.0, 0.0])

    def test_raw_importance_is_mean_of_trees(self):
        rng = np.random.default_rng(9)
        X, y = random_binary_data(rng, 50, 4)
        forest = RandomForest(n_trees=7, random_state=3).fit(X, y)
        expected = sum(t.raw_importances() for t in forest.trees_) / 7
        np.testing.assert_allclose(forest.raw_importances(), expected)

    def test_seed_reproducible(self):
        rng = np.random.default_rng(10)
        X, y = random_binary_data(rng, 50, 4)
        a = RandomForest(n_trees=10, random_state=4).fit(X, y)
        b = RandomForest(n_trees=10, random_state=4).fit(X, y)
        c = RandomForest(n_trees=10, random_state=5).fit(X, y)
        np.testing.assert_array_equal(a.raw_importances(), b.raw_importances())
        assert not np.array_equal(a.raw_importances(), c.raw_importances())


class TestLogisticRegression:
    def setup_method(self):
        rng = np.random.default_rng(1)
        self.X = rng.normal(size=(80, 3))
        self.y = (self.X @ [1.0, -2.0, 0.5] + 0.3 * rng.normal(size=80) > 0).astype(int)

    def test_matches_scipy_minimum(self):
        model = LogisticRegression(C=1.0, max_iter=5000, tol=1e-10).fit(self.X, self.y)
        yf = self.y.astype(float)
        ref = optimize.minimize(linear.objective, np.zeros(4), args=(self.X, yf, 1.0),
                                jac=linear.gradient, method="BFGS", options={"gtol": 1e-10})
        ours = linear.objective(np.append(model.coef_, model.intercept_), self.X, yf, 1.0)
        assert ours == pytest.approx(ref.fun, abs=1e-6)

    def test_loss_monotone(self):
        model = LogisticRegression(C=10.0).fit(self.X, self.y)
        assert np.all(np.diff(model.loss_history_) <= 1e-15)

    def test_tiny_c_shrinks_weights(self):
        model = LogisticRegression(C=1e-4).fit(self.X, self.y)
        assert np.max(np.abs(model.coef_)) < 1e-2

    def test_separates_training_data(self):
        model = LogisticRegression(C=100.0).fit(self.X, self.y)
        assert np.mean(model.predict(self.X) == self.y) > 0.9

    def test_rejects_nonpositive_c(self):
        with pytest.raises(ValueError):
            LogisticRegression(C=0.0)

    def test_gradient_finite_difference(self):
        rng = np.random.default_rng(12)
        theta = rng.normal(size=4)
        yf = self.y.astype(float)
        g = linear.gradient(theta, self.X, yf, 0.5)
        h = 1e-6
        fd = np.array([(linear.objective(theta + h * e, self.X, yf, 0.5)
                        - linear.objective(theta - h * e, self.X, yf, 0.5)) / (2 * h) for e in np.eye(4)])
        np.testing.assert_allclose(g, fd, rtol=1e-5, atol=1e-8)


class TestGaussianNB:
    def test_parameters_are_class_moments(self):
        X = np.array([[1.0], [3.0], [10.0], [14.0]])
        y = np.array([0, 0, 1, 1])
        nb = GaussianNB().fit(X, y)
        np.testing.assert_allclose(nb.means_[:, 0], [2.0, 12.0])
        np.testing.assert_allclose(nb.vars_[:, 0], [1.0, 4.0])
        np.testing.assert_allclose(nb.priors_, [0.5, 0.5])

    def test_probabilities_match_closed_form(self):
        X = np.array([[1.0], [3.0], [10.0], [14.0]])
        y = np.array([0, 0, 1, 1])
        nb = GaussianNB().fit(X, y)
        x = 5.0
        f0 = np.exp(-(x - 2) ** 2 / 2) / np.sqrt(2 * np.pi)
        f1 = np.exp(-(x - 12) ** 2 / 8) / np.sqrt(8 * np.pi)
        np.testing.assert_allclose(nb.predict_proba([[x]])[0, 1], f1 / (f0 + f1), rtol=1e-10)

    def test_constant_feature_does_not_crash(self):
        X = np.column_stack([np.ones(6), [0, 0, 0, 1, 1, 1]])
        y = np.array([0, 0, 0, 1, 1, 1])
        p = GaussianNB().fit(X, y).predict_proba(X)
        assert np.all(np.isfinite(p))


class TestMLP:
    def test_untrained_outputs_half(self):
        net = MLP(hidden_width=4, epochs=0).fit(np.eye(3), np.array([0, 1, 0]))
        np.testing.assert_allclose(net.predict_proba(np.eye(3))[:, 1], 0.5)

    def test_learns_xor(self):
        X = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=float) * 2 - 1
        y = np.array([0, 1, 1, 0])
        net = MLP(hidden_width=8, learning_rate=0.5, epochs=4000, l2=0.0, random_state=3).fit(X, y)
        np.testing.assert_array_equal(net.predict(X), y)

    def test_diverging_learning_rate_raises(self):
        rng = np.random.default_rng(0)
        X = rng.normal(size=(30, 3)) * 1e3
        y = np.tile([0, 1], 15)
        with pytest.raises(LearnerError):
            MLP(learning_rate=1e6, epochs=200, activation="relu").fit(X, y)

    @pytest.mark.parametrize("activation", ["tanh", "relu", "logistic"])
    def test_gradient_finite_difference(self, activation):
        rng = np.random.default_rng(21)
        X = rng.normal(size=(15, 3))
        y = rng.integers(0, 2, 15).astype(float)
        theta = rng.normal(size=3 * 4 + 4 + 4 + 1)
        _, g = mlp.loss_and_grad(theta, X, y, 4, 0.01, activation)
        h = 1e-6
        fd = np.empty_like(theta)
        for k in range(theta.size):
            e = np.zeros_like(theta)
            e[k] = h
            fd[k] = (mlp.loss_and_grad(theta + e, X, y, 4, 0.01, activation)[0]
                     - mlp.loss_and_grad(theta - e, X, y, 4, 0.01, activation)[0]) / (2 * h)
        np.testing.assert_allclose(g, fd, rtol=1e-4, atol=1e-7)


class TestInterface:
    @pytest.mark.parametrize("name", ["dt", "rf", "lr", "nb", "mlp"])
    def test_serialisation_round_trip(self, name):
        rng = np.random.default_rng(30)
        X, y = random_binary_data(rng, 30, 3)
        params = {"n_trees": 5} if name == "rf" else {"epochs": 50} if name == "mlp" else {}
        model = make_classifier(name, params, seed=3).fit(X, y)
        back = model_from_dict(model_to_dict(model))
        np.testing.assert_array_equal(back.predict_proba(X), model.predict_proba(X))

    @pytest.mark.parametrize("name", ["dt", "rf", "lr", "nb", "mlp"])
    def test_probabilities_are_distributions(self, name):
        rng = np.random.default_rng(31)
        X, y = random_binary_data(rng, 30, 2)
        params = {"n_trees": 5} if name == "rf" else {"epochs": 50} if name == "mlp" else {}
        p = make_classifier(name, params, seed=1).fit(X, y).predict_proba(X)
        assert p.shape == (30, 2)
        np.testing.assert_allclose(p.sum(axis=1), 1.0)
        assert np.all((p >= 0) & (p <= 1))

    def test_unknown_classifier(self):
        with pytest.raises(ValueError, match="svm"):
            make_classifier("svm")

    def test_label_length_mismatch(self):
        with pytest.raises(DimensionError):
            DecisionTree().fit(np.ones((3, 2)), np.array([0, 1]))

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            GaussianNB().fit(np.array([[np.nan], [1.0]]), np.array([0, 1]))
