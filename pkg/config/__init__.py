# config/__init__.py
"""
Config Package
- 실행 환경 설정 (.env)
- 모델 레지스트리 / 하이퍼파라미터 그리드
"""

from .settings import (
    OCC_THREADS,
    SOLVER_SETTINGS,
    SV_TOLERANCE,
    NPT_RANK_TOLERANCE,
    ZERO_STD_TOLERANCE,
    SSVDD_DEFAULTS,
    KMEANS_MAX_ITERS,
    PROTOCOL_DEFAULTS,
    resolve_threads,
)

from .grids import (
    MODEL_KINDS,
    REGULARIZER_OF_KIND,
    OUT_OF_SCOPE_MODELS,
    KERNEL_CHOICES,
    DISPLAY_NAMES,
    DEFAULT_GRID,
    QUICK_GRID,
    GRID_PRESETS,
    SIGMA_MULTIPLIERS,
    AUTO_D_LADDER,
    model_label,
    hyperparameters_of,
)

__all__ = [
    # 환경 설정
    "OCC_THREADS",
    "SOLVER_SETTINGS",
    "SV_TOLERANCE",
    "NPT_RANK_TOLERANCE",
    "ZERO_STD_TOLERANCE",
    "SSVDD_DEFAULTS",
    "KMEANS_MAX_ITERS",
    "PROTOCOL_DEFAULTS",
    "resolve_threads",

    # 모델 / 그리드
    "MODEL_KINDS",
    "REGULARIZER_OF_KIND",
    "OUT_OF_SCOPE_MODELS",
    "KERNEL_CHOICES",
    "DISPLAY_NAMES",
    "DEFAULT_GRID",
    "QUICK_GRID",
    "GRID_PRESETS",
    "SIGMA_MULTIPLIERS",
    "AUTO_D_LADDER",
    "model_label",
    "hyperparameters_of",
]
