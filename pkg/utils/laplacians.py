"""
그래프 라플라시안 / λ 선택 벡터
- kNN 라플라시안 (OR 대칭화, L = D - A)
- 군집 내 / 군집 간 산포 라플라시안
- ψ 변형별 λ 벡터
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.spatial.distance import cdist
from sklearn.cluster import kmeans_plusplus

from config import KMEANS_MAX_ITERS, SV_TOLERANCE
from utils.errors import DataValidationError

logger = logging.getLogger(__name__)

PSI_VARIANTS = ("psi1", "psi2", "psi3", "psi4")


@dataclass(frozen=True)
class LaplacianMatrix:
    """N×N 대칭 PSD 행렬 + 생성 정보"""
    matrix: np.ndarray
    kind: str                      # "knn" | "within_cluster" | "between_cluster" | "custom"
    param: Optional[int] = None    # k 또는 군집 수
    cluster_assignments: Optional[np.ndarray] = None


@dataclass(frozen=True)
class ClusterModel:
    """k-means 결과 (군집 번호는 0..C-1)"""
    centroids: np.ndarray
    assignments: np.ndarray
    seed: int
    objective: float
    n_iter: int

    @property
    def n_clusters(self) -> int:
        return self.centroids.shape[0]


def knn_laplacian(data: np.ndarray, k: int) -> LaplacianMatrix:
    """
    kNN 그래프 라플라시안

    A_ij = 1 (x_i ∈ N_j 또는 x_j ∈ N_i), 유클리드 거리, 동률은 작은 인덱스 우선
    """
    data = np.asarray(data, dtype=float)
    n = data.shape[0]
    if not 1 <= k <= n - 1:
        raise DataValidationError(f"k 는 1..N-1 범위여야 합니다: k={k}, N={n}")
    if not np.isfinite(data).all():
        raise DataValidationError("kNN 그래프 입력에 비유한값이 있습니다")

    dist = cdist(data, data, "euclidean")
    np.fill_diagonal(dist, np.inf)
    neighbors = np.argsort(dist, axis=1, kind="stable")[:, :k]

    adjacency = np.zeros((n, n))
    rows = np.repeat(np.arange(n), k)
    adjacency[rows, neighbors.ravel()] = 1.0
    adjacency = np.maximum(adjacency, adjacency.T)

    laplacian = np.diag(adjacency.sum(axis=1)) - adjacency
    return LaplacianMatrix(matrix=laplacian, kind="knn", param=k)


def kmeans(
    data: np.ndarray,
    n_clusters: int,
    seed: int,
    max_iters: int = KMEANS_MAX_ITERS
) -> ClusterModel:
    """
    k-means++ 초기화 + Lloyd 반복
    - 빈 군집은 매 반복 가장 큰 군집의 최원점으로 복구 (sklearn KMeans 는 이 규칙을 지정할 수 없어 반복은 직접 수행)
    """
    data = np.asarray(data, dtype=float)
    n = data.shape[0]
    if not 1 <= n_clusters <= n:
        raise DataValidationError(f"군집 수는 1..N 범위여야 합니다: C={n_clusters}, N={n}")

    centroids, _ = kmeans_plusplus(data, n_clusters=n_clusters, random_state=seed)
    centroids = centroids.astype(float)
    assignments = np.full(n, -1)

    n_iter = 0
    for n_iter in range(1, max_iters + 1):
        dist = cdist(data, centroids, "sqeuclidean")
        new_assignments = np.argmin(dist, axis=1)
        new_assignments = _repair_empty_clusters(data, new_assignments, n_clusters)

        stable = np.array_equal(new_assignments, assignments)
        assignments = new_assignments
        centroids = np.vstack([data[assignments == c].mean(axis=0) for c in range(n_clusters)])
        if stable:
            break

    objective = float(((data - centroids[assignments]) ** 2).sum())
    logger.debug(f"k-means 완료: C={n_clusters}, 반복={n_iter}, 목적함수={objective:.6g}")
    return ClusterModel(
        centroids=centroids,
        assignments=assignments,
        seed=seed,
        objective=objective,
        n_iter=n_iter,
    )


def _repair_empty_clusters(data: np.ndarray, assignments: np.ndarray, n_clusters: int) -> np.ndarray:
    assignments = assignments.copy()
    for c in range(n_clusters):
        if np.any(assignments == c):
            continue
        sizes = np.bincount(assignments, minlength=n_clusters)
        largest = int(np.argmax(sizes))
        members = np.where(assignments == largest)[0]
        center = data[members].mean(axis=0)
        offsets = ((data[members] - center) ** 2).sum(axis=1)
        # 동률이면 앞 인덱스
        farthest = members[int(np.argmax(offsets))]
        assignments[farthest] = c
        logger.warning(f"빈 군집 {c} 복구: 군집 {largest} 의 샘플 {farthest} 재배정")
    return assignments


def _cluster_indicators(clusters: ClusterModel, n: int) -> np.ndarray:
    assignments = np.asarray(clusters.assignments)
    if assignments.shape != (n,):
        raise DataValidationError(f"군집 배정 길이({assignments.shape[0]}) != n({n})")
    indicators = np.zeros((n, clusters.n_clusters))
    indicators[np.arange(n), assignments] = 1.0
    if (indicators.sum(axis=0) == 0).any():
        empty = np.where(indicators.sum(axis=0) == 0)[0].tolist()
        raise DataValidationError(f"빈 군집이 있습니다: {empty}")
    return indicators


def within_cluster_laplacian(clusters: ClusterModel, n: int) -> LaplacianMatrix:
    """L_w = I - Σ_c (1/N_c) 1_c 1_cᵀ"""
    indicators = _cluster_indicators(clusters, n)
    sizes = indicators.sum(axis=0)
    matrix = np.eye(n) - (indicators / sizes) @ indicators.T
    return LaplacianMatrix(
        matrix=matrix,
        kind="within_cluster",
        param=clusters.n_clusters,
        cluster_assignments=np.asarray(clusters.assignments),
    )


def between_cluster_laplacian(clusters: ClusterModel, n: int) -> LaplacianMatrix:
    """L_b = Σ_c N_c (1_c/N_c - 1/N)(1_c/N_c - 1/N)ᵀ"""
    indicators = _cluster_indicators(clusters, n)
    sizes = indicators.sum(axis=0)
    diffs = indicators / sizes - 1.0 / n        # n×C, 열 c = 1_c/N_c - 1/N
    matrix = (diffs * sizes) @ diffs.T
    return LaplacianMatrix(
        matrix=matrix,
        kind="between_cluster",
        param=clusters.n_clusters,
        cluster_assignments=np.asarray(clusters.assignments),
    )


def support_vector_masks(alpha: np.ndarray, C: float):
    """(경계 안쪽 α>0, 자유 SV 0<α<C, 상한 α=C) 마스크"""
    alpha = np.asarray(alpha, dtype=float)
    tol = SV_TOLERANCE * C
    positive = alpha > tol
    at_bound = alpha >= C - tol
    free = positive & ~at_bound
    return positive, free, at_bound


def lambda_vector(variant: str, alpha: np.ndarray, C: float) -> np.ndarray:
    """
    ψ 변형별 λ

    - psi1: 0 (정규화 항 없음)
    - psi2: 모두 1
    - psi3: α (경계 + 경계 밖)
    - psi4: 0 < α < C 인 경우만 α
    """
    if variant not in PSI_VARIANTS:
        raise DataValidationError(f"알 수 없는 ψ 변형: {variant}")
    alpha = np.asarray(alpha, dtype=float)
    tol = SV_TOLERANCE * C
    if (alpha < -tol).any() or (alpha > C + tol).any():
        raise DataValidationError(f"α 가 상자 [0, C={C}] 를 벗어났습니다")

    if variant == "psi1":
        return np.zeros_like(alpha)
    if variant == "psi2":
        return np.ones_like(alpha)

    positive, free, _ = support_vector_masks(alpha, C)
    if variant == "psi3":
        return np.where(positive, alpha, 0.0)
    return np.where(free, alpha, 0.0)
