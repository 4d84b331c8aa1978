"""
데이터셋 모듈
- CSV 로드 및 검증 (헤더, 숫자 변환, 비유한값 거부)
- 타깃 클래스 기준 정규화
- 계층화 train/test 분할, 계층화 k-fold
"""
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Tuple

import numpy as np
import pandas as pd
from sklearn.model_selection import StratifiedKFold, StratifiedShuffleSplit

from config import ZERO_STD_TOLERANCE
from utils.errors import DataValidationError, InfeasibleProblemError

logger = logging.getLogger(__name__)

# 레이블 인코딩 (타깃 = 신뢰 사용자)
TARGET = 1
OUTLIER = -1


def label_name(value: int) -> str:
    return "target" if value == TARGET else "outlier"


@dataclass(frozen=True)
class Dataset:
    """N×D 특징 행렬 + 타깃/아웃라이어 레이블"""
    features: np.ndarray
    labels: np.ndarray
    feature_names: List[str] = field(default_factory=list)

    def __post_init__(self):
        features = np.array(self.features, dtype=float)
        labels = np.array(self.labels, dtype=int)

        if features.ndim != 2 or features.shape[0] < 1 or features.shape[1] < 1:
            raise DataValidationError(f"특징 행렬은 N×D (N≥1, D≥1) 이어야 합니다: shape={features.shape}")
        if labels.shape != (features.shape[0],):
            raise DataValidationError(
                f"레이블 길이({labels.shape[0] if labels.ndim else 0})가 N({features.shape[0]})과 다릅니다"
            )
        if not np.isin(labels, (TARGET, OUTLIER)).all():
            raise DataValidationError("레이블은 target(1) / outlier(-1) 만 허용됩니다")
        bad_rows = np.where(~np.isfinite(features).all(axis=1))[0]
        if bad_rows.size:
            raise DataValidationError(f"비유한값이 포함된 행: {bad_rows[:10].tolist()}")

        names = list(self.feature_names) or [f"f{j}" for j in range(features.shape[1])]
        if len(names) != features.shape[1]:
            raise DataValidationError(f"특징 이름 수({len(names)}) != D({features.shape[1]})")

        features.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "feature_names", names)

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def subset(self, indices) -> "Dataset":
        indices = np.asarray(indices, dtype=int)
        return Dataset(self.features[indices], self.labels[indices], self.feature_names)

    def targets(self) -> np.ndarray:
        """타깃 클래스 행만 반환"""
        return self.features[self.labels == TARGET]

    def class_counts(self) -> dict:
        return {
            "target": int((self.labels == TARGET).sum()),
            "outlier": int((self.labels == OUTLIER).sum()),
        }


@dataclass(frozen=True)
class NormalizationStats:
    """타깃 클래스 평균 / 표준편차"""
    mean: np.ndarray
    std: np.ndarray


@dataclass(frozen=True)
class SplitPlan:
    """반복별 (train_indices, test_indices)"""
    seed: int
    n_repeats: int
    train_fraction: float
    splits: Tuple[Tuple[np.ndarray, np.ndarray], ...]


def _unreadable(path: Path, error: Exception) -> DataValidationError:
    if isinstance(error, UnicodeDecodeError):
        return DataValidationError(f"UTF-8 로 읽을 수 없는 파일입니다 (byte offset {error.start}): {path}")
    return DataValidationError(f"CSV 형식 오류: {str(error).strip()} ({path})")


def load_csv(
    path,
    label_column: str,
    positive_label: str,
    purpose: str = "train"
) -> Dataset:
    """
    CSV 파일 로드

    Args:
        path: CSV 경로 (UTF-8, 첫 행 헤더)
        label_column: 레이블 열 이름
        positive_label: 타깃 클래스로 매핑할 값 (정확한 문자열 비교)
        purpose: "train" | "evaluate" - 단일 클래스 파일 경고 여부
    """
    path = Path(path)
    if not path.is_file():
        raise DataValidationError(f"데이터 파일이 없습니다: {path}")

    try:
        header = pd.read_csv(
            path, nrows=1, header=None, dtype=str, keep_default_na=False, encoding="utf-8"
        )
    except pd.errors.EmptyDataError:
        raise DataValidationError(f"헤더 행이 없습니다: {path}") from None
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise _unreadable(path, e) from e

    columns = [str(c).strip() for c in header.iloc[0].tolist()]
    if any(c == "" for c in columns):
        raise DataValidationError(f"헤더에 비어 있는 열 이름이 있습니다: {path}")
    if all(np.isfinite(pd.to_numeric(pd.Series(columns), errors="coerce"))):
        raise DataValidationError(f"헤더 행이 없습니다 (첫 행이 모두 숫자): {path}")
    duplicates = sorted({c for c in columns if columns.count(c) > 1})
    if duplicates:
        raise DataValidationError(f"중복된 헤더: {duplicates} ({path})")
    if label_column not in columns:
        raise DataValidationError(f"레이블 열 '{label_column}' 이(가) 없습니다: {path}")

    try:
        frame = pd.read_csv(
            path, header=0, names=columns, dtype=str, keep_default_na=False, encoding="utf-8"
        )
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise _unreadable(path, e) from e
    if frame.empty:
        raise DataValidationError(f"데이터 행이 없습니다: {path}")

    feature_names = [c for c in columns if c != label_column]
    if not feature_names:
        raise DataValidationError(f"특징 열이 없습니다: {path}")

    features = np.empty((len(frame), len(feature_names)), dtype=float)
    for j, name in enumerate(feature_names):
        raw = frame[name].str.strip()
        values = pd.to_numeric(raw, errors="coerce").to_numpy(dtype=float)
        bad = np.where(~np.isfinite(values))[0]
        if bad.size:
            row = int(bad[0])
            # 행 번호는 헤더 다음 첫 데이터 행을 1 로 센다
            raise DataValidationError(
                f"숫자로 변환할 수 없는 값 '{frame[name].iloc[row]}' "
                f"(row={row + 1}, column='{name}'): {path}"
            )
        features[:, j] = values

    raw_labels = frame[label_column].to_numpy(dtype=str)
    labels = np.where(raw_labels == positive_label, TARGET, OUTLIER)

    dataset = Dataset(features, labels, feature_names)
    counts = dataset.class_counts()
    if purpose == "evaluate" and (counts["target"] == 0 or counts["outlier"] == 0):
        logger.warning(f"평가 파일에 한 클래스만 있습니다 ({counts}): {path}")

    logger.info(f"CSV 로드 완료: {path.name} (N={dataset.n_samples}, D={dataset.n_features}, {counts})")
    return dataset


def _check_min_class_size(labels: np.ndarray, minimum: int, context: str):
    for value in (TARGET, OUTLIER):
        count = int((labels == value).sum())
        if count < minimum:
            raise InfeasibleProblemError(
                f"{context}: '{label_name(value)}' 클래스 샘플 수({count})가 {minimum} 미만입니다"
            )


def make_split_plan(
    dataset: Dataset,
    seed: int,
    n_repeats: int = 5,
    train_fraction: float = 0.7
) -> SplitPlan:
    """
    계층화 반복 분할 (StratifiedShuffleSplit 하나의 난수열에서 반복별로 셔플)
    """
    if not 0.0 < train_fraction < 1.0:
        raise DataValidationError(f"train_fraction 은 (0,1) 범위여야 합니다: {train_fraction}")
    if n_repeats < 1:
        raise DataValidationError(f"n_repeats 는 1 이상이어야 합니다: {n_repeats}")
    _check_min_class_size(dataset.labels, 2, "분할")

    n = dataset.n_samples
    train_size = int(round(train_fraction * n))
    train_size = min(max(train_size, 2), n - 2)

    splitter = StratifiedShuffleSplit(
        n_splits=n_repeats,
        train_size=train_size,
        test_size=n - train_size,
        random_state=seed,
    )
    splits = tuple(
        (np.sort(train_idx), np.sort(test_idx))
        for train_idx, test_idx in splitter.split(dataset.features, dataset.labels)
    )
    return SplitPlan(seed=seed, n_repeats=n_repeats, train_fraction=train_fraction, splits=splits)


def fit_normalizer(train: Dataset) -> NormalizationStats:
    """타깃 클래스 행만으로 평균 / 모표준편차 계산 (표준편차 0 은 1 로 대체)"""
    targets = train.targets()
    if targets.shape[0] == 0:
        raise DataValidationError("정규화 통계를 계산할 타깃 샘플이 없습니다")

    mean = targets.mean(axis=0)
    std = targets.std(axis=0, ddof=0)
    degenerate = std <= ZERO_STD_TOLERANCE * np.maximum(1.0, np.abs(mean))
    if degenerate.any():
        logger.debug(f"분산 0 특징 {int(degenerate.sum())}개 -> std=1")
    std = np.where(degenerate, 1.0, std)
    return NormalizationStats(mean=mean, std=std)


def apply_normalizer(stats: NormalizationStats, data: Dataset) -> Dataset:
    if data.n_features != stats.mean.shape[0]:
        raise DataValidationError(
            f"차원 불일치: 데이터 D={data.n_features}, 정규화 통계 D={stats.mean.shape[0]}"
        )
    features = (data.features - stats.mean) / stats.std
    return Dataset(features, data.labels, data.feature_names)


def kfold_indices(train: Dataset, k: int, seed: int) -> List[Tuple[np.ndarray, np.ndarray]]:
    """계층화 k-fold (fit_indices, validate_indices) 목록"""
    if k < 2:
        raise DataValidationError(f"k 는 2 이상이어야 합니다: {k}")
    _check_min_class_size(train.labels, k, f"{k}-fold 교차검증")

    folds = StratifiedKFold(n_splits=k, shuffle=True, random_state=seed)
    return [
        (np.sort(fit_idx), np.sort(val_idx))
        for fit_idx, val_idx in folds.split(train.features, train.labels)
    ]


def make_synthetic_benchmark(
    n_target: int = 300,
    n_outlier: int = 300,
    seed: int = 0
) -> Dataset:
    """
    2차원 합성 벤치마크
    - 타깃: 두 가우시안 혼합
    - 아웃라이어: 두 가우시안을 둘러싼 고리
    """
    rng = np.random.default_rng(seed)
    half = n_target // 2
    centers = np.array([[-2.0, 0.0], [2.0, 0.0]])
    target = np.vstack([
        centers[0] + 0.5 * rng.standard_normal((half, 2)),
        centers[1] + 0.5 * rng.standard_normal((n_target - half, 2)),
    ])

    angles = rng.uniform(0.0, 2.0 * np.pi, n_outlier)
    radii = 6.0 + 0.3 * rng.standard_normal(n_outlier)
    outlier = np.column_stack([radii * np.cos(angles), radii * np.sin(angles)])

    features = np.vstack([target, outlier])
    labels = np.concatenate([np.full(n_target, TARGET), np.full(n_outlier, OUTLIER)])
    return Dataset(features, labels, ["x1", "x2"])


def write_dataset_csv(dataset: Dataset, path, label_column: str = "label"):
    """Dataset 을 CSV 로 저장 (target -> trusted, outlier -> untrusted)"""
    frame = pd.DataFrame(dataset.features, columns=dataset.feature_names)
    frame[label_column] = np.where(dataset.labels == TARGET, "trusted", "untrusted")
    frame.to_csv(path, index=False)
