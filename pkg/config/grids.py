"""
모델 종류 / 하이퍼파라미터 그리드 설정
- 모델 레지스트리 (선형 + NPT 커널 조합)
- 기본 그리드 및 프리셋
"""

# 모델 종류별 하이퍼파라미터 (sigma 는 커널 사용 시 자동 추가)
MODEL_KINDS = {
    "svdd": ["C"],
    "ocsvm": ["nu"],
    "ssvdd-psi1": ["C", "d", "eta"],
    "ssvdd-psi2": ["C", "d", "eta", "beta"],
    "ssvdd-psi3": ["C", "d", "eta", "beta"],
    "ssvdd-psi4": ["C", "d", "eta", "beta"],
    "ssvdd-gamma-knn": ["C", "d", "eta", "beta", "k"],
    "ssvdd-gamma-within": ["C", "d", "eta", "beta", "n_clusters"],
    "ssvdd-gamma-between": ["C", "d", "eta", "beta", "n_clusters"],
}

# 모델 종류 -> 정규화 항 종류
REGULARIZER_OF_KIND = {
    "ssvdd-psi1": "none",
    "ssvdd-psi2": "psi2",
    "ssvdd-psi3": "psi3",
    "ssvdd-psi4": "psi4",
    "ssvdd-gamma-knn": "gamma_knn",
    "ssvdd-gamma-within": "gamma_within",
    "ssvdd-gamma-between": "gamma_between",
}

# 구현 범위 밖 베이스라인 (명시적으로 거부)
OUT_OF_SCOPE_MODELS = {
    "esvdd": "ESVDD",
    "geocsvm": "GEOCSVM",
    "gesvdd": "GESVDD",
    "gessvdd": "GESSVDD",
}

KERNEL_CHOICES = ("none", "rbf")

# 결과 테이블 표시 이름
DISPLAY_NAMES = {
    "svdd": "SVDD",
    "ocsvm": "OCSVM",
    "ssvdd-psi1": "SSVDDψ1",
    "ssvdd-psi2": "SSVDDψ2",
    "ssvdd-psi3": "SSVDDψ3",
    "ssvdd-psi4": "SSVDDψ4",
    "ssvdd-gamma-knn": "SSVDDγL_kNN",
    "ssvdd-gamma-within": "SSVDDγL_w",
    "ssvdd-gamma-between": "SSVDDγL_b",
}

# "auto": d ∈ {1..D} (커널이면 AUTO_D_LADDER, NPT 랭크까지), "median": σ = 2^-2..2^2 × 중앙값 거리
DEFAULT_GRID = {
    "C": [0.05, 0.1, 0.2, 0.3, 0.4, 0.5],
    "beta": [1e-3, 1e-2, 1e-1, 1e0, 1e1],
    "eta": [1e-4, 1e-3, 1e-2, 1e-1],
    "d": "auto",
    "k": [2, 3, 4, 5, 6, 7, 8, 9, 10],
    "n_clusters": [2, 3, 4, 5, 6, 7, 8, 9, 10],
    "nu": [0.05, 0.1, 0.2, 0.3, 0.4, 0.5],
    "sigma": "median",
}

QUICK_GRID = {
    "C": [0.1, 0.3],
    "beta": [1e-2],
    "eta": [1e-2],
    "d": [1, 2],
    "k": [5],
    "n_clusters": [3],
    "nu": [0.1, 0.3],
    "sigma": "median",
}

GRID_PRESETS = {
    "default": DEFAULT_GRID,
    "quick": QUICK_GRID,
}

SIGMA_MULTIPLIERS = [0.25, 0.5, 1.0, 2.0, 4.0]

# 커널 경로 d="auto": NPT 랭크 r 미만의 사다리 값 + r
AUTO_D_LADDER = [1, 2, 5, 10, 20, 50, 100, 200]


def model_label(kind: str, kernel: bool) -> str:
    """결과 파일에 쓰는 모델 식별자 (예: ssvdd-gamma-knn+rbf)"""
    return f"{kind}+rbf" if kernel else f"{kind}+linear"


def hyperparameters_of(kind: str, kernel: bool) -> list:
    """모델 종류에 적용되는 하이퍼파라미터 이름 목록"""
    params = list(MODEL_KINDS[kind])
    if kernel:
        params.append("sigma")
    return params
