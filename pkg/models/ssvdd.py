"""
부분공간 SVDD (SSVDD)
- 투영 행렬 Q (d×D) 와 SVDD 기술을 번갈아 최적화
- 정규화 항: Tr(Q X Λ Xᵀ Qᵀ)
    ψ 계열: Λ = λλᵀ,  γ 계열: Λ = 그래프 라플라시안
- Q ← Q - η∇L 후 QR 로 행 직교정규화
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy.linalg import eigh

from config import SOLVER_SETTINGS, SSVDD_DEFAULTS
from models.svdd import SvddModel, classify, decision_scores, solve_svdd
from utils.errors import ConfigError, DataValidationError
from utils.laplacians import (
    LaplacianMatrix,
    between_cluster_laplacian,
    kmeans,
    knn_laplacian,
    lambda_vector,
    within_cluster_laplacian,
)

logger = logging.getLogger(__name__)

REGULARIZER_KINDS = (
    "none", "psi2", "psi3", "psi4",
    "gamma_knn", "gamma_within", "gamma_between", "gamma_custom",
)

# α 에 의존하는 정규화 항 (매 반복 재계산)
ALPHA_DEPENDENT = ("psi3", "psi4")


@dataclass(frozen=True)
class RegularizerSpec:
    """
    kind: none(ψ1) | psi2 | psi3 | psi4 | gamma_knn | gamma_within | gamma_between | gamma_custom
    param: gamma_knn 의 k, gamma_within/between 의 군집 수
    laplacian: gamma_custom 에서 사용할 N×N 행렬
    """
    kind: str = "none"
    beta: float = 0.0
    param: Optional[int] = None
    laplacian: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.kind not in REGULARIZER_KINDS:
            raise ConfigError(f"regularizer.kind: 알 수 없는 정규화 항 '{self.kind}'")
        if not np.isfinite(self.beta) or self.beta < 0:
            raise ConfigError(f"regularizer.beta: β 는 0 이상이어야 합니다 ({self.beta})")
        if self.kind in ("gamma_knn", "gamma_within", "gamma_between") and not self.param:
            raise ConfigError(f"regularizer.param: '{self.kind}' 에는 k / 군집 수가 필요합니다")
        if self.kind == "gamma_custom" and self.laplacian is None:
            raise ConfigError("regularizer.laplacian: gamma_custom 에는 행렬이 필요합니다")

    @property
    def effective_beta(self) -> float:
        return 0.0 if self.kind == "none" else self.beta


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    objective: float
    radius_sq: float


@dataclass(frozen=True)
class SsvddModel:
    Q: np.ndarray
    inner: SvddModel
    spec: RegularizerSpec
    eta: float
    d: int
    n_iters: int
    history: List[IterationRecord] = field(default_factory=list)

    @property
    def n_features(self) -> int:
        return self.Q.shape[1]


def _fix_row_signs(Q: np.ndarray) -> np.ndarray:
    """각 행의 절댓값 최대 원소가 양수가 되도록 부호 고정"""
    pivots = Q[np.arange(Q.shape[0]), np.argmax(np.abs(Q), axis=1)]
    signs = np.where(pivots < 0, -1.0, 1.0)
    return Q * signs[:, None]


def init_projection(data: np.ndarray, d: int, seed: int, init: str = "pca") -> np.ndarray:
    """
    초기 투영 행렬

    - pca: 타깃 학습 데이터 공분산의 상위 d 개 주성분 (행)
    - random: 시드 고정 가우시안 행렬의 QR
    """
    data = np.atleast_2d(np.asarray(data, dtype=float))
    D = data.shape[1]
    if not 1 <= d <= D:
        raise DataValidationError(f"d 는 1..D 범위여야 합니다: d={d}, D={D}")

    if init == "random":
        rng = np.random.default_rng(seed)
        basis, _ = np.linalg.qr(rng.standard_normal((D, d)))
        return _fix_row_signs(basis.T)
    if init != "pca":
        raise ConfigError(f"ssvdd.init: 알 수 없는 초기화 '{init}'")

    centered = data - data.mean(axis=0)
    covariance = centered.T @ centered / max(data.shape[0], 1)
    eigvals, eigvecs = eigh(covariance)
    order = np.argsort(eigvals, kind="stable")[::-1][:d]
    return _fix_row_signs(eigvecs[:, order].T)


def orthonormalize_rows(Q: np.ndarray) -> np.ndarray:
    """QR (Qᵀ = UR, R 대각 양수) 으로 행 직교정규화"""
    basis, upper = np.linalg.qr(Q.T)
    signs = np.where(np.diag(upper) < 0, -1.0, 1.0)
    return (basis * signs).T


def regularizer_matrix(
    spec: RegularizerSpec,
    data: np.ndarray,
    alpha: np.ndarray,
    C: float,
    seed: int
) -> np.ndarray:
    """Tr(Q X Λ Xᵀ Qᵀ) 의 Λ (N×N)"""
    data = np.atleast_2d(np.asarray(data, dtype=float))
    n = data.shape[0]

    if spec.kind == "none":
        return np.zeros((n, n))
    if spec.kind in ("psi2", "psi3", "psi4"):
        lam = lambda_vector(spec.kind, alpha, C)
        return np.outer(lam, lam)
    return build_laplacian(spec, data, seed).matrix


def build_laplacian(spec: RegularizerSpec, data: np.ndarray, seed: int) -> LaplacianMatrix:
    n = data.shape[0]
    if spec.kind == "gamma_knn":
        return knn_laplacian(data, spec.param)
    if spec.kind == "gamma_within":
        return within_cluster_laplacian(kmeans(data, spec.param, seed), n)
    if spec.kind == "gamma_between":
        return between_cluster_laplacian(kmeans(data, spec.param, seed), n)
    if spec.kind == "gamma_custom":
        matrix = np.asarray(spec.laplacian, dtype=float)
        if matrix.shape != (n, n):
            raise DataValidationError(f"라플라시안 크기 {matrix.shape} != ({n}, {n})")
        return LaplacianMatrix(matrix=matrix, kind="custom")
    raise ConfigError(f"regularizer.kind: '{spec.kind}' 는 라플라시안 종류가 아닙니다")


def lagrangian_gradient(
    Q: np.ndarray,
    data: np.ndarray,
    alpha: np.ndarray,
    laplacian: np.ndarray,
    beta: float
) -> np.ndarray:
    """
    ∇_Q L = 2Q [ X diag(α) Xᵀ - (Xα)(Xα)ᵀ + β X Λ Xᵀ ]   (X = dataᵀ, D×N)
    """
    data = np.atleast_2d(np.asarray(data, dtype=float))
    alpha = np.asarray(alpha, dtype=float)
    laplacian = np.asarray(laplacian, dtype=float)
    n, D = data.shape
    if Q.shape[1] != D or alpha.shape != (n,) or laplacian.shape != (n, n):
        raise DataValidationError(
            f"차원 불일치: Q={Q.shape}, data={data.shape}, alpha={alpha.shape}, Λ={laplacian.shape}"
        )

    weighted_mean = data.T @ alpha
    scatter = (data.T * alpha) @ data - np.outer(weighted_mean, weighted_mean)
    if beta:
        scatter = scatter + beta * (data.T @ laplacian @ data)
    return 2.0 * Q @ scatter


def lagrangian_value(
    Q: np.ndarray,
    data: np.ndarray,
    alpha: np.ndarray,
    laplacian: np.ndarray,
    beta: float
) -> float:
    """L = Σα_i ||Qx_i||² - ||Q Σα_i x_i||² + β Tr(Q X Λ Xᵀ Qᵀ)"""
    projected = data @ Q.T
    center_proj = alpha @ projected
    value = float(alpha @ (projected ** 2).sum(axis=1) - center_proj @ center_proj)
    if beta:
        value += beta * float(np.trace(projected.T @ laplacian @ projected))
    return value


def fit_ssvdd(
    data: np.ndarray,
    C: float,
    spec: RegularizerSpec,
    d: int,
    eta: float,
    n_iters: int = SSVDD_DEFAULTS["n_iters"],
    seed: int = 0,
    init: str = SSVDD_DEFAULTS["init"],
    tol: float = SOLVER_SETTINGS["tol"]
) -> SsvddModel:
    """
    교대 최적화

    1) z_i = Q x_i  2) SVDD 풀이 -> α  3) Λ 구성  4) Q ← Q - η∇L  5) 직교정규화
    반복 후 마지막 SVDD 풀이로 기술을 확정한다.

    Args:
        data: N×D 정규화된 타깃 클래스 데이터 (선형 또는 NPT 표현)
    """
    data = np.atleast_2d(np.asarray(data, dtype=float))
    if not np.isfinite(data).all():
        raise DataValidationError("SSVDD 학습 데이터에 비유한값이 있습니다")
    if eta < 0 or not np.isfinite(eta):
        raise ConfigError(f"ssvdd.eta: 학습률은 0 이상이어야 합니다 ({eta})")
    if n_iters < 0:
        raise ConfigError(f"ssvdd.n_iters: 0 이상이어야 합니다 ({n_iters})")

    Q = init_projection(data, d, seed, init=init)
    beta = spec.effective_beta

    # α 와 무관한 Λ 는 한 번만 구성
    fixed_laplacian = None
    if spec.kind not in ALPHA_DEPENDENT:
        fixed_laplacian = regularizer_matrix(spec, data, np.zeros(data.shape[0]), C, seed)

    inner = solve_svdd(data @ Q.T, C, tol=tol)
    history: List[IterationRecord] = []

    for iteration in range(1, n_iters + 1):
        if fixed_laplacian is None:
            laplacian = regularizer_matrix(spec, data, inner.alpha, C, seed)
        else:
            laplacian = fixed_laplacian

        gradient = lagrangian_gradient(Q, data, inner.alpha, laplacian, beta)
        Q = Q - eta * gradient
        if not np.isfinite(Q).all():
            raise FloatingPointError(f"SSVDD 반복 {iteration}: Q 에 비유한값 발생 (eta={eta})")
        Q = orthonormalize_rows(Q)

        inner = solve_svdd(data @ Q.T, C, tol=tol)
        history.append(IterationRecord(iteration, inner.objective, inner.radius_sq))
        logger.debug(
            f"SSVDD 반복 {iteration}/{n_iters}: 목적함수={inner.objective:.6g}, R²={inner.radius_sq:.6g}"
        )

    logger.info(
        f"SSVDD 학습 완료: kind={spec.kind}, d={d}, η={eta}, 반복={n_iters}, R²={inner.radius_sq:.4g}"
    )
    return SsvddModel(
        Q=Q,
        inner=inner,
        spec=spec,
        eta=float(eta),
        d=int(d),
        n_iters=int(n_iters),
        history=history,
    )


def project(model: SsvddModel, samples: np.ndarray) -> np.ndarray:
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    if samples.shape[1] != model.n_features:
        raise DataValidationError(f"차원 불일치: 샘플 D={samples.shape[1]}, 모델 D={model.n_features}")
    return samples @ model.Q.T


def ssvdd_scores(model: SsvddModel, samples: np.ndarray) -> np.ndarray:
    return decision_scores(model.inner, project(model, samples))


def classify_ssvdd(model: SsvddModel, sample: np.ndarray) -> Tuple[int, float]:
    return classify(model.inner, project(model, sample)[0])
