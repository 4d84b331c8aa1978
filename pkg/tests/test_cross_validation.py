import numpy as np
import pytest

from config import QUICK_GRID
from evaluation.cross_validation import _selection_key, cross_validate, evaluate_fold
from evaluation.pipeline import ModelRecipe
from utils.dataset import kfold_indices


def test_chosen_sigma_has_best_recomputed_mean_gm(small_benchmark):
    recipe = ModelRecipe("svdd", True, dict(QUICK_GRID, C=[0.3]))
    result = cross_validate(small_benchmark, recipe, k=3, seed=4, n_jobs=2)
    assert len(result.scores) == 5

    folds = kfold_indices(small_benchmark, 3, 4)
    recomputed = {}
    for score in result.scores:
        gms = [
            evaluate_fold(small_benchmark, recipe, score.params, fit_idx, val_idx, seed=4)
            for fit_idx, val_idx in folds
        ]
        recomputed[score.params["sigma"]] = float(np.mean(gms))
        assert score.mean_gm == pytest.approx(recomputed[score.params["sigma"]], abs=1e-12)
    assert recomputed[result.best_params["sigma"]] == pytest.approx(max(recomputed.values()))


def test_thread_count_does_not_change_result(small_benchmark):
    recipe = ModelRecipe("ocsvm", False, dict(QUICK_GRID))
    serial = cross_validate(small_benchmark, recipe, k=3, seed=0, n_jobs=1)
    parallel = cross_validate(small_benchmark, recipe, k=3, seed=0, n_jobs=4)
    assert serial.best_params == parallel.best_params
    assert [s.fold_gms for s in serial.scores] == [s.fold_gms for s in parallel.scores]


def test_single_point_grid_skips_search(small_benchmark):
    recipe = ModelRecipe("svdd", False, dict(QUICK_GRID, C=[0.4]))
    result = cross_validate(small_benchmark, recipe, k=3, seed=0)
    assert result.best_params == {"C": 0.4}
    assert result.scores[0].fold_gms == ()


def test_infeasible_grid_point_scores_zero(small_benchmark):
    # 폴드 학습 타깃 수보다 1/C 가 크면 해가 없음
    recipe = ModelRecipe("svdd", False, dict(QUICK_GRID, C=[0.01, 0.5]))
    result = cross_validate(small_benchmark, recipe, k=3, seed=0)
    infeasible = next(s for s in result.scores if s.params["C"] == 0.01)
    assert infeasible.fold_gms == (0.0, 0.0, 0.0)
    assert result.best_params["C"] == 0.5


def test_ties_prefer_smaller_d_then_c():
    from evaluation.cross_validation import GridPointScore

    scores = [
        GridPointScore(0, {"C": 0.5, "d": 2}, (0.8,)),
        GridPointScore(1, {"C": 0.1, "d": 2}, (0.8,)),
        GridPointScore(2, {"C": 0.5, "d": 1}, (0.8,)),
        GridPointScore(3, {"C": 0.1, "d": 3}, (0.7,)),
    ]
    assert min(scores, key=_selection_key).index == 2
