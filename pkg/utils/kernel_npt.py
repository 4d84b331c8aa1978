"""
RBF 커널 + 비선형 투영 기법 (NPT)
- K_ij = exp(-||x_i - x_j||² / 2σ²)
- 중심화 커널의 고유분해로 명시적 사상 Φ = U_r Λ_r^{1/2}
- 학습 통계로 중심화한 표본 외 사상
"""
import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import eigh
from scipy.spatial.distance import cdist, pdist

from config import NPT_RANK_TOLERANCE, SIGMA_MULTIPLIERS
from utils.errors import DataValidationError, InfeasibleProblemError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KernelConfig:
    sigma: float

    def __post_init__(self):
        if not np.isfinite(self.sigma) or self.sigma <= 0:
            raise DataValidationError(f"sigma 는 양의 유한값이어야 합니다: {self.sigma}")


@dataclass(frozen=True)
class NptMap:
    """학습된 NPT 사상"""
    train_data: np.ndarray
    sigma: float
    eigvals: np.ndarray          # 내림차순, 모두 양수
    eigvecs: np.ndarray          # N×r
    column_means: np.ndarray     # 학습 커널 열 평균 (길이 N)
    total_mean: float            # 학습 커널 전체 평균

    @property
    def rank(self) -> int:
        return self.eigvals.shape[0]

    @property
    def n_features(self) -> int:
        return self.train_data.shape[1]

    def training_representation(self) -> np.ndarray:
        return self.eigvecs * np.sqrt(self.eigvals)


def rbf_kernel(A: np.ndarray, B: np.ndarray, sigma: float) -> np.ndarray:
    KernelConfig(sigma)
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    if A.shape[1] != B.shape[1]:
        raise DataValidationError(f"차원 불일치: {A.shape[1]} vs {B.shape[1]}")
    sq_dist = cdist(A, B, "sqeuclidean")
    return np.exp(-sq_dist / (2.0 * sigma ** 2))


def center_kernel(K: np.ndarray) -> np.ndarray:
    """K̂ = (I - 11ᵀ/N) K (I - 11ᵀ/N)"""
    column_means = K.mean(axis=0)
    centered = K - column_means[None, :] - K.mean(axis=1)[:, None] + K.mean()
    # 반올림 오차로 깨진 대칭 복원
    return 0.5 * (centered + centered.T)


def fit_npt(train: np.ndarray, sigma: float) -> NptMap:
    train = np.asarray(train, dtype=float)
    n = train.shape[0]
    if n < 2:
        raise DataValidationError(f"NPT 는 2개 이상의 학습 샘플이 필요합니다: N={n}")

    K = rbf_kernel(train, train, sigma)
    K_centered = center_kernel(K)

    eigvals, eigvecs = eigh(K_centered)
    order = np.argsort(eigvals)[::-1]
    eigvals, eigvecs = eigvals[order], eigvecs[:, order]

    largest = eigvals[0] if eigvals.size else 0.0
    if largest <= 0:
        raise InfeasibleProblemError(f"퇴화된 커널 (모든 고유값이 0 이하, sigma={sigma})")
    keep = eigvals > NPT_RANK_TOLERANCE * largest

    npt_map = NptMap(
        train_data=train.copy(),
        sigma=float(sigma),
        eigvals=eigvals[keep],
        eigvecs=eigvecs[:, keep],
        column_means=K.mean(axis=0),
        total_mean=float(K.mean()),
    )
    logger.debug(f"NPT: N={n}, sigma={sigma:.4g}, rank={npt_map.rank}")
    return npt_map


def map_npt(npt_map: NptMap, samples: np.ndarray) -> np.ndarray:
    """φ_t = k̂_tᵀ U_r Λ_r^{-1/2}"""
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    if samples.shape[1] != npt_map.n_features:
        raise DataValidationError(
            f"차원 불일치: 샘플 D={samples.shape[1]}, NPT 학습 D={npt_map.n_features}"
        )
    cross = rbf_kernel(samples, npt_map.train_data, npt_map.sigma)
    cross_centered = (
        cross
        - npt_map.column_means[None, :]
        - cross.mean(axis=1)[:, None]
        + npt_map.total_mean
    )
    return cross_centered @ (npt_map.eigvecs / np.sqrt(npt_map.eigvals))


def median_sigma_grid(data: np.ndarray, multipliers: Sequence[float] = SIGMA_MULTIPLIERS) -> list:
    """중앙값 휴리스틱 σ 그리드 (multiplier × 쌍별 거리 중앙값)"""
    data = np.asarray(data, dtype=float)
    if data.shape[0] < 2:
        return [float(m) for m in multipliers]
    median = float(np.median(pdist(data, "euclidean")))
    if median <= 0:
        median = 1.0
    return [float(m * median) for m in multipliers]
