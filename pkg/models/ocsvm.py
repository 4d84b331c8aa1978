"""
OCSVM 베이스라인 (ν 매개변수화, 원점 분리)
- min ½ΣΣ α_iα_j z_iᵀz_j  s.t. 0 ≤ α_i ≤ 1/(νN), Σα = 1
- ρ 는 자유 서포트 벡터에서 복원
"""
import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from config import SOLVER_SETTINGS, SV_TOLERANCE
from models.smo import solve_box_simplex_qp
from utils.dataset import OUTLIER, TARGET
from utils.errors import DataValidationError, InfeasibleProblemError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OcsvmModel:
    alpha: np.ndarray
    nu: float
    rho: float
    train_data: np.ndarray
    objective: float
    n_iter: int = 0
    converged: bool = True

    @property
    def upper_bound(self) -> float:
        return 1.0 / (self.nu * self.train_data.shape[0])

    @property
    def n_features(self) -> int:
        return self.train_data.shape[1]


def solve_ocsvm(
    data: np.ndarray,
    nu: float,
    tol: float = SOLVER_SETTINGS["tol"],
    max_iter: int = SOLVER_SETTINGS["max_iter"],
    record_history: bool = False
) -> OcsvmModel:
    data = np.atleast_2d(np.asarray(data, dtype=float))
    if not 0.0 < nu <= 1.0:
        raise InfeasibleProblemError(f"nu 는 (0, 1] 범위여야 합니다: {nu}")
    if data.shape[0] < 1 or not np.isfinite(data).all():
        raise DataValidationError("OCSVM 학습 데이터가 비어 있거나 비유한값을 포함합니다")

    n = data.shape[0]
    upper = 1.0 / (nu * n)
    gram = data @ data.T
    solution = solve_box_simplex_qp(
        gram, np.zeros(n), upper, tol=tol, max_iter=max_iter, record_history=record_history
    )
    alpha = solution.alpha
    rho = _recover_rho(alpha, solution.gradient, upper)

    return OcsvmModel(
        alpha=alpha,
        nu=float(nu),
        rho=rho,
        train_data=data,
        objective=solution.objective,
        n_iter=solution.n_iter,
        converged=solution.converged,
    )


def _recover_rho(alpha: np.ndarray, gradient: np.ndarray, upper: float) -> float:
    """
    자유 SV: f(x_i) = 0 -> ρ = (Kα)_i 평균
    자유 SV 가 없으면 [max_{α=C} (Kα)_i, min_{α=0} (Kα)_i] 의 중점
    """
    tol = SV_TOLERANCE * upper
    at_upper = alpha >= upper - tol
    at_zero = alpha <= tol
    free = ~at_upper & ~at_zero
    if free.any():
        return float(gradient[free].mean())

    lower_bound = gradient[at_upper].max() if at_upper.any() else None
    upper_bound = gradient[at_zero].min() if at_zero.any() else None
    if lower_bound is None:
        return float(upper_bound)
    if upper_bound is None:
        return float(lower_bound)
    return float(0.5 * (lower_bound + upper_bound))


def decision_scores(model: OcsvmModel, samples: np.ndarray) -> np.ndarray:
    """Σ α_i z_iᵀz - ρ"""
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    if samples.shape[1] != model.n_features:
        raise DataValidationError(f"차원 불일치: 샘플 d={samples.shape[1]}, 모델 d={model.n_features}")
    return samples @ (model.train_data.T @ model.alpha) - model.rho


def classify_ocsvm(model: OcsvmModel, sample: np.ndarray) -> Tuple[int, float]:
    score = float(decision_scores(model, np.atleast_2d(sample))[0])
    return (TARGET if score >= 0 else OUTLIER), score
