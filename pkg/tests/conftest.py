"""공용 픽스처 - 작은 합성 데이터셋과 CSV 작성 도우미"""
from pathlib import Path

import numpy as np
import pytest

from utils.dataset import OUTLIER, TARGET, Dataset, make_synthetic_benchmark


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def small_benchmark() -> Dataset:
    """타깃 40 + 아웃라이어 40 (CV / CLI 테스트용)"""
    return make_synthetic_benchmark(n_target=40, n_outlier=40, seed=7)


@pytest.fixture
def blob_dataset(rng) -> Dataset:
    """원점 근처 타깃 30개, 멀리 떨어진 아웃라이어 20개"""
    target = rng.normal(0.0, 1.0, size=(30, 3))
    outlier = rng.normal(6.0, 1.0, size=(20, 3))
    labels = np.concatenate([np.full(30, TARGET), np.full(20, OUTLIER)])
    return Dataset(np.vstack([target, outlier]), labels, ["a", "b", "c"])


@pytest.fixture
def write_csv(tmp_path):
    """문자열 내용을 tmp_path 아래 CSV 로 저장하고 경로 반환"""
    def _write(text: str, name: str = "data.csv") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path
    return _write
