"""
SMO 쌍대 솔버

    min_α  ½ αᵀHα + pᵀα
    s.t.   0 ≤ α_i ≤ C,  Σ α_i = 1

두 좌표 갱신 + 최대 위반 쌍 선택. SVDD (H=2K, p=-diag K) 와
OCSVM (H=K, p=0, C=1/νN) 이 같은 솔버를 사용한다.
"""
import logging
from dataclasses import dataclass, field
from typing import List

import numpy as np

from config import SOLVER_SETTINGS
from utils.errors import DataValidationError, InfeasibleProblemError

logger = logging.getLogger(__name__)


@dataclass
class DualSolution:
    alpha: np.ndarray
    gradient: np.ndarray          # Hα + p
    objective: float              # ½αᵀHα + pᵀα (최소화 기준)
    n_iter: int
    converged: bool
    max_violation: float
    history: List[float] = field(default_factory=list)


def initial_alpha(n: int, C: float) -> np.ndarray:
    """균등 초기해 (C ≥ 1/N 이면 실행 가능)"""
    if C * n < 1.0 - 1e-12:
        raise InfeasibleProblemError(f"C={C} < 1/N={1.0 / n:.6g}: Σα=1 을 만족할 수 없습니다")
    return np.full(n, 1.0 / n)


def solve_box_simplex_qp(
    H: np.ndarray,
    p: np.ndarray,
    C: float,
    tol: float = SOLVER_SETTINGS["tol"],
    max_iter: int = SOLVER_SETTINGS["max_iter"],
    record_history: bool = False
) -> DualSolution:
    """
    Args:
        H: N×N 대칭 PSD 헤시안
        p: 길이 N 선형항
        C: 상자 상한
        tol: 최대 KKT 위반 허용치
        max_iter: 반복 상한
        record_history: 반복별 목적함수 기록 여부
    """
    H = np.asarray(H, dtype=float)
    p = np.asarray(p, dtype=float)
    n = p.shape[0]
    if H.shape != (n, n):
        raise DataValidationError(f"헤시안 크기 {H.shape} != ({n}, {n})")
    if not (np.isfinite(H).all() and np.isfinite(p).all()):
        raise DataValidationError("쌍대 문제에 비유한값이 있습니다")

    alpha = initial_alpha(n, C)
    gradient = H @ alpha + p
    objective = float(0.5 * alpha @ (H @ alpha) + p @ alpha)
    history = [objective] if record_history else []

    tau = SOLVER_SETTINGS["tau"]
    bound_eps = 1e-12 * max(C, 1.0)
    diag = np.diag(H)

    n_iter = 0
    max_violation = np.inf
    converged = False
    while n_iter < max_iter:
        # i: 증가 가능 (α<C) 중 기울기 최소, j: 감소 가능 (α>0) 중 기울기 최대
        up = alpha < C - bound_eps
        low = alpha > bound_eps
        if not up.any() or not low.any():
            max_violation = 0.0
            converged = True
            break

        grad_up = np.where(up, gradient, np.inf)
        grad_low = np.where(low, gradient, -np.inf)
        i = int(np.argmin(grad_up))
        j = int(np.argmax(grad_low))
        max_violation = float(grad_low[j] - grad_up[i])
        if max_violation < tol:
            converged = True
            break

        curvature = diag[i] + diag[j] - 2.0 * H[i, j]
        if curvature <= tau:
            curvature = tau
        step = max_violation / curvature
        step = min(step, C - alpha[i], alpha[j])

        alpha[i] += step
        alpha[j] -= step
        gradient += step * (H[:, i] - H[:, j])
        objective += -step * max_violation + 0.5 * step * step * (diag[i] + diag[j] - 2.0 * H[i, j])
        n_iter += 1
        if record_history:
            history.append(objective)

    # 누적 오차 제거
    alpha = np.clip(alpha, 0.0, C)
    gradient = H @ alpha + p
    objective = float(0.5 * alpha @ (H @ alpha) + p @ alpha)

    if not converged:
        logger.warning(f"SMO 미수렴: {max_iter}회 반복, 최대 KKT 위반={max_violation:.3g}")
    else:
        logger.debug(f"SMO 수렴: {n_iter}회 반복, 목적함수={objective:.8g}")

    return DualSolution(
        alpha=alpha,
        gradient=gradient,
        objective=objective,
        n_iter=n_iter,
        converged=converged,
        max_violation=max_violation,
        history=history,
    )
