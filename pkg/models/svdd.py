"""
SVDD (Support Vector Data Description)
- 쌍대 문제: max Σ α_i z_iᵀz_i - ΣΣ α_i α_j z_iᵀz_j  (0 ≤ α ≤ C, Σα = 1)
- 중심 a = Σ α_i z_i, 반경² 은 자유 서포트 벡터 거리 평균
"""
import logging
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from config import SOLVER_SETTINGS, SV_TOLERANCE
from models.smo import solve_box_simplex_qp
from utils.dataset import OUTLIER, TARGET
from utils.errors import DataValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SvddModel:
    alpha: np.ndarray
    C: float
    radius_sq: float
    train_data: np.ndarray
    objective: float              # 최종 쌍대 목적함수 (최대화 기준)
    n_iter: int = 0
    converged: bool = True
    history: List[float] = field(default_factory=list)

    @property
    def n_features(self) -> int:
        return self.train_data.shape[1]

    def support_mask(self) -> np.ndarray:
        return self.alpha > SV_TOLERANCE * self.C

    def free_support_mask(self) -> np.ndarray:
        tol = SV_TOLERANCE * self.C
        return (self.alpha > tol) & (self.alpha < self.C - tol)


def _validated(data: np.ndarray) -> np.ndarray:
    data = np.atleast_2d(np.asarray(data, dtype=float))
    if data.shape[0] < 1:
        raise DataValidationError("SVDD 학습 데이터가 비어 있습니다")
    if not np.isfinite(data).all():
        raise DataValidationError("SVDD 학습 데이터에 비유한값이 있습니다")
    return data


def dual_objective(alpha: np.ndarray, gram: np.ndarray) -> float:
    """Σ α_i K_ii - αᵀKα"""
    return float(alpha @ np.diag(gram) - alpha @ gram @ alpha)


def solve_svdd(
    data: np.ndarray,
    C: float,
    tol: float = SOLVER_SETTINGS["tol"],
    max_iter: int = SOLVER_SETTINGS["max_iter"],
    record_history: bool = False
) -> SvddModel:
    """
    SVDD 쌍대 문제 풀이

    Args:
        data: N×d 학습 표현 (선형 또는 NPT 사상 결과)
        C: 상자 상한 (C ≥ 1/N). C > 1 은 하드 마진과 동일
    """
    data = _validated(data)
    gram = data @ data.T

    # max Σα K_ii - αᵀKα  <=>  min ½αᵀ(2K)α - diag(K)ᵀα
    solution = solve_box_simplex_qp(
        2.0 * gram,
        -np.diag(gram),
        C,
        tol=tol,
        max_iter=max_iter,
        record_history=record_history,
    )
    alpha = solution.alpha

    distances = _training_distances(alpha, gram)
    radius_sq = _radius_sq(alpha, C, distances)

    return SvddModel(
        alpha=alpha,
        C=float(C),
        radius_sq=radius_sq,
        train_data=data,
        objective=dual_objective(alpha, gram),
        n_iter=solution.n_iter,
        converged=solution.converged,
        history=[-value for value in solution.history],
    )


def _training_distances(alpha: np.ndarray, gram: np.ndarray) -> np.ndarray:
    return np.diag(gram) - 2.0 * gram @ alpha + alpha @ gram @ alpha


def _radius_sq(alpha: np.ndarray, C: float, distances: np.ndarray) -> float:
    tol = SV_TOLERANCE * C
    free = (alpha > tol) & (alpha < C - tol)
    if free.any():
        return float(max(distances[free].mean(), 0.0))
    positive = alpha > tol
    return float(max(distances[positive].max(), 0.0))


def center(model: SvddModel) -> np.ndarray:
    return model.alpha @ model.train_data


def distance_sq_to_center(model: SvddModel, sample: np.ndarray) -> float:
    """zᵀz - 2Σα_i z_iᵀz + ΣΣ α_iα_j z_iᵀz_j"""
    return float(distances_sq_to_center(model, np.atleast_2d(sample))[0])


def distances_sq_to_center(model: SvddModel, samples: np.ndarray) -> np.ndarray:
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    if samples.shape[1] != model.n_features:
        raise DataValidationError(f"차원 불일치: 샘플 d={samples.shape[1]}, 모델 d={model.n_features}")
    cross = samples @ model.train_data.T
    gram_term = model.alpha @ (model.train_data @ (model.train_data.T @ model.alpha))
    return np.einsum("ij,ij->i", samples, samples) - 2.0 * cross @ model.alpha + gram_term


def decision_scores(model: SvddModel, samples: np.ndarray) -> np.ndarray:
    """R² - ||z - a||² (0 이상이면 타깃)"""
    return model.radius_sq - distances_sq_to_center(model, samples)


def classify(model: SvddModel, sample: np.ndarray) -> Tuple[int, float]:
    score = float(decision_scores(model, np.atleast_2d(sample))[0])
    return (TARGET if score >= 0 else OUTLIER), score
