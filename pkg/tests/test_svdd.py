import time

import numpy as np
import pytest

from models.ocsvm import solve_ocsvm
from models.svdd import (
    center,
    classify,
    decision_scores,
    distance_sq_to_center,
    solve_svdd,
)
from tests.oracles import brute_force_qp
from utils.dataset import OUTLIER, TARGET
from utils.errors import DataValidationError, InfeasibleProblemError


def _svdd_oracle(data: np.ndarray, C: float):
    gram = data @ data.T
    value, alpha = brute_force_qp(2.0 * gram, -np.diag(gram), C)
    return -value, alpha


class TestSolveSvdd:
    def test_single_point(self):
        model = solve_svdd(np.array([[2.0, -1.0]]), C=1.0)
        np.testing.assert_allclose(model.alpha, [1.0])
        assert model.radius_sq == pytest.approx(0.0, abs=1e-12)
        np.testing.assert_allclose(center(model), [2.0, -1.0])

    def test_two_points(self):
        model = solve_svdd(np.array([[-1.0, 0.0], [1.0, 0.0]]), C=1.0)
        np.testing.assert_allclose(model.alpha, [0.5, 0.5], atol=1e-8)
        np.testing.assert_allclose(center(model), [0.0, 0.0], atol=1e-8)
        assert model.radius_sq == pytest.approx(1.0, abs=1e-8)

    def test_infeasible_c(self):
        with pytest.raises(InfeasibleProblemError):
            solve_svdd(np.zeros((4, 2)) + np.arange(4)[:, None], C=0.1)

    def test_rejects_non_finite(self):
        with pytest.raises(DataValidationError):
            solve_svdd(np.array([[np.nan, 1.0]]), C=1.0)

    def test_oracle_equivalence_on_random_instances(self):
        """SVDD / OCSVM 쌍대 목적함수 == 전수 탐색 QP (50개 사례)"""
        rng = np.random.default_rng(2024)
        started = time.perf_counter()
        for case in range(50):
            n = int(rng.integers(5, 7))
            d = int(rng.integers(1, 4))
            C = float(rng.choice([0.2, 0.5, 1.0]))
            data = rng.normal(size=(n, d))

            model = solve_svdd(data, C, tol=1e-9)
            expected, _ = _svdd_oracle(data, C)
            assert model.objective == pytest.approx(expected, abs=1e-6), f"svdd case {case}"
            assert model.alpha.sum() == pytest.approx(1.0, abs=1e-8)
            assert model.alpha.min() >= -1e-8 and model.alpha.max() <= C + 1e-8

            nu = 1.0 / (C * n)
            ocsvm = solve_ocsvm(data, nu, tol=1e-9)
            gram = data @ data.T
            expected_oc, _ = brute_force_qp(gram, np.zeros(n), 1.0 / (nu * n))
            assert ocsvm.objective == pytest.approx(expected_oc, abs=1e-6), f"ocsvm case {case}"
        assert time.perf_counter() - started < 10.0

    def test_center_matches_oracle_on_full_rank_gram(self, rng):
        data = rng.normal(size=(6, 6))
        model = solve_svdd(data, 0.5, tol=1e-10)
        _, alpha = _svdd_oracle(data, 0.5)
        np.testing.assert_allclose(center(model), alpha @ data, atol=1e-6)

    def test_converges_within_iteration_cap(self, rng):
        model = solve_svdd(rng.normal(size=(20, 2)), 0.1)
        assert model.n_iter > 0
        assert model.converged

    def test_radius_from_free_support_vectors(self, rng):
        data = rng.normal(size=(30, 2))
        model = solve_svdd(data, 0.1, tol=1e-9)
        free = model.free_support_mask()
        assert free.any()
        distances = np.array([distance_sq_to_center(model, x) for x in data[free]])
        np.testing.assert_allclose(distances, model.radius_sq, atol=1e-5)


class TestDistanceAndClassify:
    @pytest.fixture
    def model(self, rng):
        return solve_svdd(rng.normal(size=(25, 3)), 0.2)

    def test_distance_matches_direct_formula(self, model, rng):
        a = center(model)
        for sample in rng.normal(size=(10, 3)):
            assert distance_sq_to_center(model, sample) == pytest.approx(
                np.sum((sample - a) ** 2), abs=1e-10
            )

    def test_center_is_target_with_score_radius(self, model):
        label, score = classify(model, center(model))
        assert label == TARGET
        assert score == pytest.approx(model.radius_sq, abs=1e-10)

    def test_sample_on_boundary_is_target(self, model):
        a = center(model)
        direction = np.array([1.0, 0.0, 0.0])
        sample = a + np.sqrt(model.radius_sq) * direction * (1.0 - 1e-9)
        label, _ = classify(model, sample)
        assert label == TARGET

    def test_far_sample_is_outlier(self, model):
        a = center(model)
        sample = a + 10.0 * np.sqrt(model.radius_sq) * np.array([0.0, 1.0, 0.0])
        label, score = classify(model, sample)
        assert label == OUTLIER
        assert score < 0

    def test_point_model_unit_distance(self):
        model = solve_svdd(np.array([[0.0, 0.0]]), 1.0)
        assert distance_sq_to_center(model, np.array([1.0, 0.0])) == pytest.approx(1.0)

    def test_dimension_mismatch(self, model):
        with pytest.raises(DataValidationError):
            decision_scores(model, np.zeros((1, 2)))

    def test_hard_margin_contains_training_data(self, rng):
        data = rng.normal(size=(15, 2))
        model = solve_svdd(data, C=1.0, tol=1e-9)
        assert (decision_scores(model, data) >= -1e-6).all()
