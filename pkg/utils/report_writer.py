"""
결과 파일 작성
- 지표 CSV (model,split,accu,tpr,tnr,pre,f1,gm + mean/std 집계 행)
- 결과 표 Markdown ("mean ± std", 소수 둘째 자리)
- 샘플별 점수 CSV, 스윕 CSV
"""
import io
from typing import Iterable, List, Sequence

import numpy as np
import pandas as pd

from config import DISPLAY_NAMES
from evaluation.experiment import ExperimentResult, SweepRow
from evaluation.metrics import METRIC_NAMES
from utils.dataset import label_name
from utils.serialization import atomic_write_text

FLOAT_FORMAT = "%.6f"
TABLE_HEADERS = ["Accu", "TPR", "TNR", "Pre", "F1", "GM"]


def _frame_to_csv(frame: pd.DataFrame) -> str:
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return buffer.getvalue()


def metrics_frame(results: Iterable[ExperimentResult]) -> pd.DataFrame:
    rows = []
    for result in results:
        for outcome in result.outcomes:
            rows.append({"model": result.label, "split": str(outcome.split), **outcome.report.metric_values()})
        rows.append({"model": result.label, "split": "mean", **result.mean})
        rows.append({"model": result.label, "split": "std", **result.std})
    return pd.DataFrame(rows, columns=["model", "split", *METRIC_NAMES])


def write_metrics_csv(results: Sequence[ExperimentResult], path) -> str:
    atomic_write_text(path, _frame_to_csv(metrics_frame(results)))
    return str(path)


def format_cell(mean: float, std: float) -> str:
    return f"{mean:.2f} ± {std:.2f}"


def display_name(label: str) -> str:
    kind = label.split("+")[0]
    return DISPLAY_NAMES.get(kind, kind)


def markdown_table(results: Sequence[ExperimentResult]) -> str:
    """선형 / 비선형 그룹으로 나눈 결과 표"""
    lines = [
        "| Model | " + " | ".join(TABLE_HEADERS) + " |",
        "|---|" + "---|" * len(TABLE_HEADERS),
    ]
    groups = [
        ("Linear OCC", [r for r in results if r.label.endswith("+linear")]),
        ("Non-linear OCC", [r for r in results if r.label.endswith("+rbf")]),
    ]
    for title, members in groups:
        if not members:
            continue
        lines.append(f"| **{title}** |" + " |" * len(TABLE_HEADERS))
        for result in members:
            cells = [format_cell(result.mean[m], result.std[m]) for m in METRIC_NAMES]
            lines.append(f"| {display_name(result.label)} | " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def write_markdown_table(results: Sequence[ExperimentResult], path) -> str:
    atomic_write_text(path, markdown_table(results))
    return str(path)


def write_scores_csv(scores: np.ndarray, predictions: np.ndarray, truth: np.ndarray, path) -> str:
    frame = pd.DataFrame({
        "index": np.arange(len(scores)),
        "score": scores,
        "prediction": [label_name(p) for p in predictions],
        "label": [label_name(t) for t in truth],
    })
    atomic_write_text(path, _frame_to_csv(frame))
    return str(path)


def sweep_frame(rows: List[SweepRow]) -> pd.DataFrame:
    records = []
    for row in rows:
        record = {"param": row.param, "value": row.value}
        record.update(row.mean)
        record.update({f"{name}_std": row.std[name] for name in METRIC_NAMES})
        records.append(record)
    columns = ["param", "value", *METRIC_NAMES, *[f"{name}_std" for name in METRIC_NAMES]]
    return pd.DataFrame(records, columns=columns)


def write_sweep_csv(rows: List[SweepRow], path) -> str:
    atomic_write_text(path, _frame_to_csv(sweep_frame(rows)))
    return str(path)


def write_report_csv(label: str, report, path, split: str = "eval") -> str:
    """단일 MetricsReport 를 지표 CSV 형식 한 행으로 저장"""
    frame = pd.DataFrame(
        [{"model": label, "split": split, **report.metric_values()}],
        columns=["model", "split", *METRIC_NAMES],
    )
    atomic_write_text(path, _frame_to_csv(frame))
    return str(path)
