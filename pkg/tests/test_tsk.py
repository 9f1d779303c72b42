import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sessc.clustering import ClusteringConfig, fit
from sessc.data import generate_synthetic, make_dataset
from sessc.tsk import (TskConfig, TskModel, design_matrix, estimate_spreads,
                       fit_tsk, log_firing_levels, normalized_firing, predict_tsk,
                       ridge_solve)
from reference import ridge_normal_equations


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            TskConfig(order="second")
        with pytest.raises(ValueError):
            TskConfig(h=0.0)
        with pytest.raises(ValueError):
            TskConfig(lam=0.0)


class TestEstimateSpreads:
    def test_zero_variance_floored(self):
        x = np.array([[1.0, 2.0]] * 4)
        u = np.ones((4, 1))
        sig = estimate_spreads(x, u, x[:1], 1.0)
        np.testing.assert_array_equal(sig, np.full((1, 2), 1e-8))

    def test_hard_cluster_hand_value(self):
        # points {0, 2} around center 1 with full membership: spread = 1
        x = np.array([[0.0], [2.0]])
        u = np.ones((2, 1))
        sig = estimate_spreads(x, u, np.array([[1.0]]), 1.0)
        assert sig[0, 0] == pytest.approx(1.0)

    def test_linear_in_h(self):
        rng = np.random.default_rng(0)
        x = rng.normal(size=(20, 3))
        u = rng.dirichlet(np.ones(2), size=20)
        centers = rng.normal(size=(2, 3))
        a = estimate_spreads(x, u, centers, 1.0)
        b = estimate_spreads(x, u, centers, 2.0)
        np.testing.assert_allclose(b, 2.0 * a)

    def test_weights_enter_at_power_one(self):
        # memberships 0.5 weigh half as much as memberships 1.0, not a quarter
        x = np.array([[0.0], [2.0], [4.0]])
        u = np.array([[1.0], [0.5], [0.0]])
        sig = estimate_spreads(x, u, np.array([[1.0]]), 1.0)
        expect = np.sqrt((1.0 * 1.0 + 0.5 * 1.0) / 1.5)
        assert sig[0, 0] == pytest.approx(expect)

    def test_empty_rule_falls_back_to_global(self):
        x = np.array([[0.0], [2.0]])
        u = np.array([[1.0, 0.0], [1.0, 0.0]])
        with pytest.warns(UserWarning, match="zero membership"):
            sig = estimate_spreads(x, u, np.array([[1.0], [5.0]]), 2.0)
        assert sig[1, 0] == pytest.approx(2.0 * x.std())


class TestFiring:
    def test_center_hit_gives_log_one(self):
        x = np.array([[1.0, 2.0]])
        centers = x.copy()
        spreads = np.full((1, 2), 0.7)
        assert log_firing_levels(x, centers, spreads)[0, 0] == 0.0

    def test_plug_in_value(self):
        # one dimension, offset 1, spread 0.5: exponent -1/(2*0.5) = -1
        lf = log_firing_levels(np.array([[1.0]]), np.array([[0.0]]),
                               np.array([[0.5]]))
        assert lf[0, 0] == pytest.approx(-1.0)

    def test_squared_variant(self):
        lf = log_firing_levels(np.array([[1.0]]), np.array([[0.0]]),
                               np.array([[0.5]]), spread_squared=True)
        assert lf[0, 0] == pytest.approx(-2.0)

    def test_matches_direct_product(self):
        rng = np.random.default_rng(1)
        x = rng.normal(size=(10, 3))
        centers = rng.normal(size=(4, 3))
        spreads = rng.uniform(0.5, 2.0, (4, 3))
        lf = log_firing_levels(x, centers, spreads)
        direct = np.ones((10, 4))
        for n in range(10):
            for r in range(4):
                for d in range(3):
                    direct[n, r] *= np.exp(-(x[n, d] - centers[r, d]) ** 2
                                           / (2 * spreads[r, d]))
        np.testing.assert_allclose(np.exp(lf), direct, atol=1e-12)

    def test_normalized_rows_sum_to_one(self):
        rng = np.random.default_rng(2)
        fbar = normalized_firing(rng.normal(size=(50, 6)) * 10)
        np.testing.assert_allclose(fbar.sum(axis=1), 1.0, atol=1e-12)

    def test_single_rule(self):
        fbar = normalized_firing(np.array([[-5.0], [0.0]]))
        np.testing.assert_array_equal(fbar, np.ones((2, 1)))

    def test_equal_levels_split_evenly(self):
        fbar = normalized_firing(np.array([[-3.0, -3.0]]))
        np.testing.assert_allclose(fbar, 0.5)

    def test_extreme_values_stable(self):
        fbar = normalized_firing(np.array([[0.0, -1e6]]))
        np.testing.assert_array_equal(fbar, [[1.0, 0.0]])
        assert np.all(np.isfinite(fbar))

    def test_shift_invariance(self):
        rng = np.random.default_rng(3)
        lf = rng.normal(size=(5, 4))
        np.testing.assert_allclose(normalized_firing(lf),
                                   normalized_firing(lf + 123.0), atol=1e-12)


class TestDesignMatrix:
    def test_zero_order_is_identity(self):
        fbar = np.array([[0.3, 0.7]])
        assert design_matrix(fbar, np.zeros((1, 2)), "zero") is fbar

    def test_first_order_zero_input(self):
        fbar = np.array([[0.4, 0.6]])
        out = design_matrix(fbar, np.zeros((1, 3)), "first")
        np.testing.assert_array_equal(out, [[0.4, 0, 0, 0, 0.6, 0, 0, 0]])

    def test_first_order_hand_value(self):
        out = design_matrix(np.array([[0.4, 0.6]]), np.array([[2.0]]), "first")
        np.testing.assert_allclose(out, [[0.4, 0.8, 0.6, 1.2]])

    def test_bad_order(self):
        with pytest.raises(ValueError):
            design_matrix(np.ones((1, 1)), np.ones((1, 1)), "third")


class TestRidge:
    def test_identity_interpolates(self):
        y = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 0.0]])
        b = ridge_solve(np.eye(3), y, 1e-12)
        np.testing.assert_allclose(b, y, atol=1e-6)

    def test_large_lambda_shrinks(self):
        rng = np.random.default_rng(4)
        xhat = rng.normal(size=(30, 5))
        y = rng.normal(size=(30, 2))
        b_one = ridge_solve(xhat, y, 1.0)
        b_big = ridge_solve(xhat, y, 1e12)
        assert np.linalg.norm(b_big) < np.linalg.norm(b_one)
        assert np.abs(b_big).max() < 1e-6

    def test_matches_normal_equations(self):
        rng = np.random.default_rng(5)
        xhat = rng.normal(size=(20, 5))
        y = rng.normal(size=(20, 3))
        for lam in (1e-3, 0.1, 10.0):
            np.testing.assert_allclose(ridge_solve(xhat, y, lam),
                                       ridge_normal_equations(xhat, y, lam),
                                       atol=1e-8)

    def test_residual_of_normal_system(self):
        rng = np.random.default_rng(6)
        xhat = rng.normal(size=(25, 4))
        y = rng.normal(size=(25, 2))
        b = ridge_solve(xhat, y, 0.01)
        gram = xhat.T @ xhat + 0.01 * np.eye(4)
        resid = np.abs(gram @ b - xhat.T @ y).max()
        assert resid < 1e-8 * max(1.0, np.abs(xhat.T @ y).max())

    def test_is_the_minimizer(self):
        rng = np.random.default_rng(7)
        xhat = rng.normal(size=(12, 3))
        y = rng.normal(size=(12, 2))
        lam = 0.5
        b = ridge_solve(xhat, y, lam)

        def loss(bmat):
            return np.sum((xhat @ bmat - y) ** 2) + lam * np.sum(bmat ** 2)

        base = loss(b)
        for _ in range(20):
            assert loss(b + 1e-3 * rng.normal(size=b.shape)) > base

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            ridge_solve(np.array([[np.inf]]), np.ones((1, 1)), 1.0)


def toy_clustered_dataset(seed=0):
    data = generate_synthetic("quadrant_gaussian", 200, 0.0, seed)
    cfg = ClusteringConfig(4, gamma=100.0, eta=0.01, beta=0.1, seed=seed)
    model = fit(data.features, data.onehot, cfg)
    return data, model


class TestFitPredict:
    def test_single_rule_predicts_class_frequencies(self):
        rng = np.random.default_rng(8)
        x = rng.normal(size=(40, 2))
        labels = np.array([0] * 30 + [1] * 10)
        data = make_dataset(x, labels)
        model = fit(x, data.onehot, ClusteringConfig(1, seed=0))
        tsk = fit_tsk(data, model, TskConfig(order="zero", h=1.0, lam=1e-9))
        scores, pred = predict_tsk(tsk, rng.normal(size=(7, 2)))
        np.testing.assert_allclose(scores, np.tile(scores[0], (7, 1)), atol=1e-12)
        np.testing.assert_allclose(scores[0], [0.75, 0.25], atol=1e-6)
        assert (pred == 0).all()

    def test_interpolation_on_training_points(self):
        # three well-separated one-point rules interpolate their labels
        x = np.array([[0.0, 0.0], [10.0, 0.0], [0.0, 10.0]])
        data = make_dataset(x, np.array([0, 1, 2]))
        cfg = ClusteringConfig(3, gamma=1.0, eta=0.0, beta=0.1, seed=0)
        model = fit(x, data.onehot, cfg)
        tsk = fit_tsk(data, model, TskConfig(order="zero", h=1.0, lam=1e-12))
        scores, pred = predict_tsk(tsk, x)
        np.testing.assert_allclose(scores, data.onehot, atol=1e-4)
        np.testing.assert_array_equal(pred, data.labels)

    def test_rule_permutation_leaves_scores_unchanged(self):
        data, cm = toy_clustered_dataset()
        for order in ("zero", "first"):
            tsk = fit_tsk(data, cm, TskConfig(order=order, h=1.0, lam=0.01))
            scores, _ = predict_tsk(tsk, data.features[:20])
            perm = np.array([2, 0, 3, 1])
            r, d = tsk.centers.shape
            if order == "zero":
                coeff = tsk.coefficients[perm]
            else:
                blocks = tsk.coefficients.reshape(r, d + 1, -1)
                coeff = blocks[perm].reshape(r * (d + 1), -1)
            shuffled = TskModel(tsk.centers[perm], tsk.spreads[perm], coeff,
                                tsk.config, tsk.n_classes)
            scores2, _ = predict_tsk(shuffled, data.features[:20])
            np.testing.assert_allclose(scores2, scores, atol=1e-9)

    def test_zero_order_scores_are_convex_combinations(self):
        data, cm = toy_clustered_dataset(1)
        tsk = fit_tsk(data, cm, TskConfig(order="zero", h=1.0, lam=0.01))
        scores, _ = predict_tsk(tsk, data.features)
        lo = tsk.coefficients.min(axis=0) - 1e-9
        hi = tsk.coefficients.max(axis=0) + 1e-9
        assert (scores >= lo).all() and (scores <= hi).all()

    def test_composition_matches_explicit_pipeline(self):
        data, cm = toy_clustered_dataset(2)
        cfg = TskConfig(order="first", h=1.0, lam=0.1)
        tsk = fit_tsk(data, cm, cfg)
        fbar = normalized_firing(log_firing_levels(data.features, tsk.centers,
                                                   tsk.spreads))
        xhat = design_matrix(fbar, data.features, "first")
        scores, _ = predict_tsk(tsk, data.features)
        np.testing.assert_allclose(scores, xhat @ tsk.coefficients, atol=1e-10)

    def test_training_feature_mismatch_rejected(self):
        data, cm = toy_clustered_dataset(3)
        other = generate_synthetic("circles", 60, 0.1, 0)
        with pytest.raises(ValueError, match="training features"):
            fit_tsk(other, cm, TskConfig())

    def test_predict_dimension_mismatch(self):
        data, cm = toy_clustered_dataset(4)
        tsk = fit_tsk(data, cm, TskConfig())
        with pytest.raises(ValueError):
            predict_tsk(tsk, np.zeros((2, 5)))

    @given(st.integers(0, 2000))
    @settings(max_examples=15, deadline=None)
    def test_firing_pipeline_never_nan(self, seed):
        rng = np.random.default_rng(seed)
        x = rng.normal(scale=10.0, size=(12, 2))
        centers = rng.normal(scale=10.0, size=(3, 2))
        spreads = np.maximum(rng.uniform(0.0, 2.0, (3, 2)), 1e-8)
        fbar = normalized_firing(log_firing_levels(x, centers, spreads))
        assert np.all(np.isfinite(fbar))
        np.testing.assert_allclose(fbar.sum(axis=1), 1.0, atol=1e-12)
