"""
모델 레시피와 학습 파이프라인
- (모델 종류, 커널 여부, 그리드) 묶음
- NPT 사상 + 선형 모델 결합 -> 커널 변형
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
from sklearn.model_selection import ParameterGrid

from config import (
    AUTO_D_LADDER,
    GRID_PRESETS,
    MODEL_KINDS,
    OUT_OF_SCOPE_MODELS,
    REGULARIZER_OF_KIND,
    SSVDD_DEFAULTS,
    hyperparameters_of,
    model_label,
)
from models.ocsvm import OcsvmModel, solve_ocsvm
from models.ocsvm import decision_scores as ocsvm_scores
from models.ssvdd import RegularizerSpec, SsvddModel, fit_ssvdd, ssvdd_scores
from models.svdd import SvddModel, solve_svdd
from models.svdd import decision_scores as svdd_scores
from utils.dataset import OUTLIER, TARGET, NormalizationStats
from utils.errors import ConfigError, DataValidationError, OCCError
from utils.kernel_npt import NptMap, fit_npt, map_npt, median_sigma_grid

logger = logging.getLogger(__name__)


def validate_model_kind(kind: str) -> str:
    kind = kind.strip().lower()
    if kind in OUT_OF_SCOPE_MODELS:
        raise ConfigError(
            f"model: '{OUT_OF_SCOPE_MODELS[kind]}' 는 구현 범위 밖의 베이스라인입니다 (out of scope)"
        )
    if kind not in MODEL_KINDS:
        raise ConfigError(f"model: 알 수 없는 모델 종류 '{kind}' (가능: {', '.join(MODEL_KINDS)})")
    return kind


@dataclass(frozen=True)
class ModelRecipe:
    """모델 종류 + 커널 여부 + 하이퍼파라미터 그리드"""
    kind: str
    kernel: bool
    grid: Dict[str, Any] = field(default_factory=lambda: dict(GRID_PRESETS["default"]))
    n_iters: int = SSVDD_DEFAULTS["n_iters"]
    init: str = SSVDD_DEFAULTS["init"]

    def __post_init__(self):
        object.__setattr__(self, "kind", validate_model_kind(self.kind))
        for name in self.parameter_names:
            if name not in self.grid:
                raise ConfigError(f"grid.{name}: '{self.label}' 에 필요한 그리드가 없습니다")
            values = self.grid[name]
            if isinstance(values, str):
                if (name, values) not in (("d", "auto"), ("sigma", "median")):
                    raise ConfigError(f"grid.{name}: 알 수 없는 값 '{values}'")
            elif len(values) == 0:
                raise ConfigError(f"grid.{name}: 빈 그리드")

    @property
    def label(self) -> str:
        return model_label(self.kind, self.kernel)

    @property
    def parameter_names(self) -> List[str]:
        return hyperparameters_of(self.kind, self.kernel)

    def expand_grid(self, train_features: np.ndarray) -> List[Dict[str, Any]]:
        """
        그리드 점 목록 (ParameterGrid 순서)
        - sigma="median" -> 타깃 학습 데이터 중앙값 휴리스틱
        - d="auto" -> 선형이면 1..D, 커널이면 NPT 랭크 r 까지의 AUTO_D_LADDER 값 + r
        """
        resolved = {}
        for name in self.parameter_names:
            values = self.grid[name]
            if name == "sigma" and values == "median":
                values = median_sigma_grid(train_features)
            resolved[name] = values
        if resolved.get("d") == "auto":
            resolved["d"] = self._auto_dimensions(train_features, resolved.get("sigma"))
        resolved = {name: list(values) for name, values in resolved.items()}
        _validate_values(resolved)
        return list(ParameterGrid(resolved))

    def _auto_dimensions(self, train_features: np.ndarray, sigmas) -> List[int]:
        if not self.kernel:
            return list(range(1, train_features.shape[1] + 1))
        ranks = []
        for sigma in sigmas:
            try:
                ranks.append(fit_npt(train_features, float(sigma)).rank)
            except OCCError as e:
                logger.debug(f"d=auto: sigma={sigma} 의 NPT 랭크 계산 생략 ({e})")
        if not ranks:
            return list(range(1, train_features.shape[1] + 1))
        rank = max(ranks)
        return [d for d in AUTO_D_LADDER if d < rank] + [rank]

    def with_grid(self, grid: Dict[str, Any]) -> "ModelRecipe":
        merged = dict(self.grid)
        merged.update(grid)
        return ModelRecipe(self.kind, self.kernel, merged, self.n_iters, self.init)


def _validate_values(grid: Dict[str, list]):
    checks = {
        "C": lambda v: v > 0,
        "beta": lambda v: v >= 0,
        "eta": lambda v: v >= 0,
        "d": lambda v: int(v) == v and v >= 1,
        "k": lambda v: int(v) == v and v >= 1,
        "n_clusters": lambda v: int(v) == v and v >= 1,
        "nu": lambda v: 0 < v <= 1,
        "sigma": lambda v: v > 0,
    }
    for name, values in grid.items():
        for value in values:
            if not checks[name](value):
                raise ConfigError(f"grid.{name}: 유효하지 않은 값 {value}")


class OneClassPipeline:
    """(선택) 정규화 -> (선택) NPT -> SVDD / OCSVM / SSVDD"""

    def __init__(
        self,
        kind: str,
        kernel: bool,
        params: Dict[str, Any],
        seed: int = 0,
        n_iters: int = SSVDD_DEFAULTS["n_iters"],
        init: str = SSVDD_DEFAULTS["init"],
        normalizer: Optional[NormalizationStats] = None
    ):
        self.kind = validate_model_kind(kind)
        self.kernel = kernel
        self.params = dict(params)
        self.seed = seed
        self.n_iters = n_iters
        self.init = init
        self.normalizer = normalizer

        self.npt: Optional[NptMap] = None
        self.model: Optional[Any] = None
        self.feature_names: List[str] = []

    @property
    def label(self) -> str:
        return model_label(self.kind, self.kernel)

    @property
    def n_input_features(self) -> Optional[int]:
        """입력 특징 차원 (학습 전이면 None)"""
        if self.feature_names:
            return len(self.feature_names)
        if self.normalizer is not None:
            return int(self.normalizer.mean.shape[0])
        if self.npt is not None:
            return int(self.npt.train_data.shape[1])
        if isinstance(self.model, SsvddModel):
            return int(self.model.Q.shape[1])
        if self.model is not None:
            return int(self.model.train_data.shape[1])
        return None

    def _normalize(self, X: np.ndarray) -> np.ndarray:
        if self.normalizer is None:
            return X
        return (X - self.normalizer.mean) / self.normalizer.std

    def _represent(self, X: np.ndarray) -> np.ndarray:
        X = self._normalize(np.atleast_2d(np.asarray(X, dtype=float)))
        if self.kernel:
            return map_npt(self.npt, X)
        return X

    def fit(self, X_target: np.ndarray) -> "OneClassPipeline":
        """타깃 클래스 샘플만으로 학습"""
        X = self._normalize(np.atleast_2d(np.asarray(X_target, dtype=float)))
        if self.kernel:
            self.npt = fit_npt(X, self.params["sigma"])
            Z = self.npt.training_representation()
        else:
            Z = X

        if self.kind == "svdd":
            self.model = solve_svdd(Z, self.params["C"])
        elif self.kind == "ocsvm":
            self.model = solve_ocsvm(Z, self.params["nu"])
        else:
            self.model = self._fit_subspace(Z)
        return self

    def _fit_subspace(self, Z: np.ndarray) -> SsvddModel:
        d = int(self.params["d"])
        if d > Z.shape[1]:
            logger.warning(f"d={d} 가 표현 차원 {Z.shape[1]} 보다 커서 {Z.shape[1]} 로 줄입니다")
            d = Z.shape[1]

        regularizer = REGULARIZER_OF_KIND[self.kind]
        param = None
        if regularizer == "gamma_knn":
            param = int(self.params["k"])
            if param > Z.shape[0] - 1:
                raise DataValidationError(f"k={param} 가 학습 샘플 수 - 1 ({Z.shape[0] - 1}) 보다 큽니다")
        elif regularizer in ("gamma_within", "gamma_between"):
            param = int(self.params["n_clusters"])
        spec = RegularizerSpec(
            kind=regularizer,
            beta=float(self.params.get("beta", 0.0)),
            param=param,
        )
        return fit_ssvdd(
            Z,
            C=self.params["C"],
            spec=spec,
            d=d,
            eta=float(self.params["eta"]),
            n_iters=self.n_iters,
            seed=self.seed,
            init=self.init,
        )

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        if self.model is None:
            raise DataValidationError("학습되지 않은 파이프라인입니다")
        Z = self._represent(X)
        if isinstance(self.model, SvddModel):
            return svdd_scores(self.model, Z)
        if isinstance(self.model, OcsvmModel):
            return ocsvm_scores(self.model, Z)
        return ssvdd_scores(self.model, Z)

    def predict(self, X: np.ndarray) -> np.ndarray:
        return np.where(self.decision_function(X) >= 0, TARGET, OUTLIER)

    def summary(self) -> Dict[str, Any]:
        """학습 로그용 요약"""
        info: Dict[str, Any] = {
            "model": self.label,
            "params": self.params,
            "seed": self.seed,
        }
        if self.npt is not None:
            info["npt_rank"] = self.npt.rank
        if isinstance(self.model, SvddModel):
            info.update(radius_sq=self.model.radius_sq, iterations=self.model.n_iter)
        elif isinstance(self.model, OcsvmModel):
            info.update(rho=self.model.rho, iterations=self.model.n_iter)
        elif isinstance(self.model, SsvddModel):
            info.update(
                radius_sq=self.model.inner.radius_sq,
                iterations=self.model.n_iters,
                history=[
                    {"iteration": h.iteration, "objective": h.objective, "radius_sq": h.radius_sq}
                    for h in self.model.history
                ],
            )
        return info
