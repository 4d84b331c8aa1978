"""
k-fold 교차검증 기반 하이퍼파라미터 선택 (기준: 폴드별 GM 의 평균)
"""
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from joblib import Parallel, delayed

from config import resolve_threads
from evaluation.metrics import compute_metrics
from evaluation.pipeline import ModelRecipe, OneClassPipeline
from utils.dataset import TARGET, Dataset, kfold_indices
from utils.errors import ConfigError, OCCError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GridPointScore:
    index: int
    params: Dict[str, Any]
    fold_gms: Tuple[float, ...]

    @property
    def mean_gm(self) -> float:
        return float(np.mean(self.fold_gms)) if self.fold_gms else float("nan")


@dataclass(frozen=True)
class CVResult:
    best_params: Dict[str, Any]
    scores: Tuple[GridPointScore, ...]


def evaluate_fold(
    train: Dataset,
    recipe: ModelRecipe,
    params: Dict[str, Any],
    fit_idx: np.ndarray,
    val_idx: np.ndarray,
    seed: int
) -> float:
    """fit 부분의 타깃 행으로 학습 -> 검증 폴드 (양 클래스) GM"""
    fit_rows = fit_idx[train.labels[fit_idx] == TARGET]
    pipeline = OneClassPipeline(
        recipe.kind, recipe.kernel, params, seed=seed, n_iters=recipe.n_iters, init=recipe.init
    )
    try:
        pipeline.fit(train.features[fit_rows])
        predictions = pipeline.predict(train.features[val_idx])
    except (OCCError, FloatingPointError) as e:
        logger.warning(f"{recipe.label} {params} 학습 실패 -> GM=0 ({e})")
        return 0.0
    return compute_metrics(predictions, train.labels[val_idx]).gm


def _score_grid_point(
    index: int,
    params: Dict[str, Any],
    train: Dataset,
    recipe: ModelRecipe,
    folds: List[Tuple[np.ndarray, np.ndarray]],
    seed: int
) -> GridPointScore:
    gms = tuple(evaluate_fold(train, recipe, params, fit_idx, val_idx, seed) for fit_idx, val_idx in folds)
    return GridPointScore(index=index, params=params, fold_gms=gms)


def _selection_key(score: GridPointScore):
    # 평균 GM 최대 -> 작은 d -> 작은 C -> 그리드 순서
    return (
        -round(score.mean_gm, 12),
        score.params.get("d", 0),
        score.params.get("C", 0.0),
        score.index,
    )


def cross_validate(
    train: Dataset,
    recipe: ModelRecipe,
    k: int = 5,
    seed: int = 0,
    n_jobs: Optional[int] = None
) -> CVResult:
    grid = recipe.expand_grid(train.targets())
    if not grid:
        raise ConfigError(f"grid: '{recipe.label}' 의 그리드가 비어 있습니다")

    folds = kfold_indices(train, k, seed)
    if len(grid) == 1:
        logger.debug(f"{recipe.label}: 그리드 점이 하나뿐이라 교차검증을 생략합니다")
        only = GridPointScore(index=0, params=grid[0], fold_gms=())
        return CVResult(best_params=grid[0], scores=(only,))

    scores = Parallel(n_jobs=resolve_threads(n_jobs), prefer="threads")(
        delayed(_score_grid_point)(index, params, train, recipe, folds, seed)
        for index, params in enumerate(grid)
    )
    best = min(scores, key=_selection_key)
    logger.info(f"{recipe.label}: {len(grid)}개 그리드 점 중 선택 {best.params} (평균 GM={best.mean_gm:.4f})")
    return CVResult(best_params=best.params, scores=tuple(scores))
