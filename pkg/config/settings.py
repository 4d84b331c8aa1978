"""
실행 환경 설정
- .env 로드 (OCC_THREADS 등)
- 수치 허용오차 / 반복 상한 기본값
"""
import os

from dotenv import load_dotenv

load_dotenv(override=False)


def _env_int(name: str, default: int) -> int:
    """정수 환경변수 읽기 (비어 있거나 잘못된 값이면 기본값)"""
    raw = os.getenv(name, "").strip()
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError:
        return default
    return value if value > 0 else default


# 병렬 처리 상한 (기본값: 사용 가능한 코어 수)
OCC_THREADS = _env_int("OCC_THREADS", os.cpu_count() or 1)

# SMO 쌍대 솔버
SOLVER_SETTINGS = {
    "tol": 1e-6,          # 최대 KKT 위반 허용치
    "max_iter": 10_000,   # 반복 상한
    "tau": 1e-12,         # 2차 계수 하한
}

# 서포트 벡터 판정 허용치 (C 에 곱해서 사용)
SV_TOLERANCE = 1e-7

# NPT 고유값 절단 (최대 고유값 대비 상대 허용치)
NPT_RANK_TOLERANCE = 1e-9

# 정규화: 이 값보다 작은 표준편차는 0 으로 간주
ZERO_STD_TOLERANCE = 1e-12

# SSVDD 기본값
SSVDD_DEFAULTS = {
    "n_iters": 20,
    "init": "pca",     # "pca" | "random"
}

# k-means 기본 반복 상한
KMEANS_MAX_ITERS = 100

# 실험 프로토콜 기본값
PROTOCOL_DEFAULTS = {
    "seed": 0,
    "n_repeats": 5,
    "train_fraction": 0.7,
    "cv_folds": 5,
}


def resolve_threads(requested: int | None = None) -> int:
    """요청된 스레드 수를 OCC_THREADS 상한으로 제한"""
    if requested is None or requested <= 0:
        return OCC_THREADS
    return min(requested, OCC_THREADS)
