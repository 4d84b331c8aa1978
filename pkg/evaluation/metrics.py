"""
평가 지표 (양성 클래스 = 타깃)
- Accu, TPR, TNR, Pre, F1, GM = √(TPR·TNR)
- 분모 0 이면 해당 지표 0
"""
import math
from dataclasses import asdict, dataclass

import numpy as np

from utils.dataset import OUTLIER, TARGET
from utils.errors import DataValidationError

METRIC_NAMES = ("accu", "tpr", "tnr", "pre", "f1", "gm")


def _ratio(numerator: float, denominator: float) -> float:
    return numerator / denominator if denominator else 0.0


@dataclass(frozen=True)
class MetricsReport:
    tp: int
    fn: int
    tn: int
    fp: int
    accu: float
    tpr: float
    tnr: float
    pre: float
    f1: float
    gm: float

    @classmethod
    def from_counts(cls, tp: int, fn: int, tn: int, fp: int) -> "MetricsReport":
        tpr = _ratio(tp, tp + fn)
        tnr = _ratio(tn, tn + fp)
        pre = _ratio(tp, tp + fp)
        return cls(
            tp=int(tp),
            fn=int(fn),
            tn=int(tn),
            fp=int(fp),
            accu=_ratio(tp + tn, tp + tn + fp + fn),
            tpr=tpr,
            tnr=tnr,
            pre=pre,
            f1=_ratio(2.0 * pre * tpr, pre + tpr),
            gm=math.sqrt(tpr * tnr),
        )

    def as_dict(self) -> dict:
        return asdict(self)

    def metric_values(self) -> dict:
        return {name: getattr(self, name) for name in METRIC_NAMES}


def compute_metrics(predictions, truth) -> MetricsReport:
    predictions = np.asarray(predictions)
    truth = np.asarray(truth)
    if predictions.shape != truth.shape:
        raise DataValidationError(f"예측 길이({predictions.shape}) != 정답 길이({truth.shape})")
    if predictions.size < 1:
        raise DataValidationError("평가할 샘플이 없습니다")
    for name, values in (("predictions", predictions), ("truth", truth)):
        if not np.isin(values, (TARGET, OUTLIER)).all():
            raise DataValidationError(f"{name} 에 target/outlier 외의 값이 있습니다")

    tp = int(((predictions == TARGET) & (truth == TARGET)).sum())
    fn = int(((predictions == OUTLIER) & (truth == TARGET)).sum())
    tn = int(((predictions == OUTLIER) & (truth == OUTLIER)).sum())
    fp = int(((predictions == TARGET) & (truth == OUTLIER)).sum())
    return MetricsReport.from_counts(tp, fn, tn, fp)
