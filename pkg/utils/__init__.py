"""
Utils Package
- 데이터셋 로드 / 분할 / 정규화
- 그래프 라플라시안, k-means
- RBF 커널 + NPT 사상
"""

from .errors import (
    OCCError,
    DataValidationError,
    InfeasibleProblemError,
    ConfigError,
    ModelFormatError,
)
from .dataset import (
    TARGET,
    OUTLIER,
    Dataset,
    NormalizationStats,
    SplitPlan,
    load_csv,
    make_split_plan,
    fit_normalizer,
    apply_normalizer,
    kfold_indices,
    make_synthetic_benchmark,
)
from .laplacians import knn_laplacian, kmeans, within_cluster_laplacian, between_cluster_laplacian
from .kernel_npt import rbf_kernel, fit_npt, map_npt

__all__ = [
    "OCCError",
    "DataValidationError",
    "InfeasibleProblemError",
    "ConfigError",
    "ModelFormatError",
    "TARGET",
    "OUTLIER",
    "Dataset",
    "NormalizationStats",
    "SplitPlan",
    "load_csv",
    "make_split_plan",
    "fit_normalizer",
    "apply_normalizer",
    "kfold_indices",
    "make_synthetic_benchmark",
    "knn_laplacian",
    "kmeans",
    "within_cluster_laplacian",
    "between_cluster_laplacian",
    "rbf_kernel",
    "fit_npt",
    "map_npt",
]
