"""
실험 프로토콜
- 반복 분할마다: 타깃 기준 정규화 -> CV 로 하이퍼파라미터 선택 -> 전체 학습 타깃으로 재학습 -> 테스트 평가
- 분할 간 평균 ± 표본 표준편차
- 하이퍼파라미터 스윕 (다른 파라미터는 첫 값에서 한 번 CV 후 고정)
"""
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from evaluation.cross_validation import CVResult, cross_validate
from evaluation.metrics import METRIC_NAMES, MetricsReport, compute_metrics
from evaluation.pipeline import ModelRecipe, OneClassPipeline
from utils.dataset import (
    Dataset,
    NormalizationStats,
    SplitPlan,
    apply_normalizer,
    fit_normalizer,
)
from utils.errors import ConfigError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SplitOutcome:
    split: int
    report: MetricsReport
    params: Dict[str, Any]
    normalizer: NormalizationStats
    cv: CVResult


@dataclass(frozen=True)
class ExperimentResult:
    label: str
    outcomes: Tuple[SplitOutcome, ...]
    mean: Dict[str, float]
    std: Dict[str, float]

    @property
    def reports(self) -> List[MetricsReport]:
        return [o.report for o in self.outcomes]

    @property
    def chosen_params(self) -> List[Dict[str, Any]]:
        return [o.params for o in self.outcomes]


@dataclass(frozen=True)
class SweepRow:
    param: str
    value: float
    mean: Dict[str, float]
    std: Dict[str, float]


def aggregate(reports: Sequence[MetricsReport]) -> Tuple[Dict[str, float], Dict[str, float]]:
    """지표별 평균 / 표본 표준편차 (n=1 이면 0)"""
    mean, std = {}, {}
    for name in METRIC_NAMES:
        values = np.array([getattr(r, name) for r in reports], dtype=float)
        mean[name] = float(values.mean())
        std[name] = float(values.std(ddof=1)) if values.size > 1 else 0.0
    return mean, std


def run_split(
    dataset: Dataset,
    recipe: ModelRecipe,
    split: int,
    train_idx: np.ndarray,
    test_idx: np.ndarray,
    k: int,
    seed: int,
    n_jobs: Optional[int] = None
) -> SplitOutcome:
    train = dataset.subset(train_idx)
    test = dataset.subset(test_idx)

    # 정규화 통계와 CV 는 학습 분할만 사용
    stats = fit_normalizer(train)
    train_n = apply_normalizer(stats, train)
    test_n = apply_normalizer(stats, test)

    cv = cross_validate(train_n, recipe, k=k, seed=seed + split, n_jobs=n_jobs)
    pipeline = OneClassPipeline(
        recipe.kind,
        recipe.kernel,
        cv.best_params,
        seed=seed,
        n_iters=recipe.n_iters,
        init=recipe.init,
    ).fit(train_n.targets())

    report = compute_metrics(pipeline.predict(test_n.features), test_n.labels)
    logger.info(f"{recipe.label} 분할 {split}: GM={report.gm:.4f}, Accu={report.accu:.4f}")
    return SplitOutcome(split=split, report=report, params=cv.best_params, normalizer=stats, cv=cv)


def run_experiment(
    dataset: Dataset,
    recipe: ModelRecipe,
    plan: SplitPlan,
    k: int = 5,
    seed: int = 0,
    n_jobs: Optional[int] = None
) -> ExperimentResult:
    outcomes = tuple(
        run_split(dataset, recipe, split, train_idx, test_idx, k, seed, n_jobs)
        for split, (train_idx, test_idx) in enumerate(plan.splits)
    )
    mean, std = aggregate([o.report for o in outcomes])
    return ExperimentResult(label=recipe.label, outcomes=outcomes, mean=mean, std=std)


def run_sweep(
    dataset: Dataset,
    recipe: ModelRecipe,
    plan: SplitPlan,
    param: str,
    values: Sequence[float],
    k: int = 5,
    seed: int = 0,
    n_jobs: Optional[int] = None
) -> List[SweepRow]:
    """스윕 값마다 반복 평균 지표 (나머지 파라미터는 첫 값에서 CV 로 고정)"""
    if param not in recipe.parameter_names:
        raise ConfigError(
            f"sweep.param: '{param}' 는 '{recipe.label}' 에 적용할 수 없습니다 (parameter inapplicable)"
        )
    if not values:
        raise ConfigError("sweep.values: 스윕 값이 비어 있습니다")

    train_idx, _ = plan.splits[0]
    train = dataset.subset(train_idx)
    train_n = apply_normalizer(fit_normalizer(train), train)
    first = recipe.with_grid({param: [values[0]]})
    fixed = dict(cross_validate(train_n, first, k=k, seed=seed, n_jobs=n_jobs).best_params)
    logger.info(f"스윕 고정 파라미터: {fixed}")

    rows = []
    for value in values:
        point = dict(fixed)
        point[param] = value
        single = recipe.with_grid({name: [v] for name, v in point.items()})
        result = run_experiment(dataset, single, plan, k=k, seed=seed, n_jobs=n_jobs)
        rows.append(SweepRow(param=param, value=value, mean=result.mean, std=result.std))
    return rows
