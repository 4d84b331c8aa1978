import numpy as np
import pandas as pd
import pytest
from docx import Document

from evaluation.experiment import ExperimentResult, SplitOutcome, SweepRow
from evaluation.metrics import METRIC_NAMES, MetricsReport
from utils.dataset import OUTLIER, TARGET, NormalizationStats
from utils.docx_generator import ExperimentReportGenerator
from utils.report_writer import (
    format_cell,
    markdown_table,
    metrics_frame,
    write_metrics_csv,
    write_scores_csv,
    write_sweep_csv,
)
from utils.serialization import atomic_save


def _result(label, accu=0.8, std=0.05):
    stats = NormalizationStats(mean=np.zeros(2), std=np.ones(2))
    outcomes = tuple(
        SplitOutcome(split=i, report=MetricsReport.from_counts(4, 1, 4, 1), params={"C": 0.3}, normalizer=stats, cv=None)
        for i in range(2)
    )
    mean = {name: accu for name in METRIC_NAMES}
    spread = {name: std for name in METRIC_NAMES}
    return ExperimentResult(label=label, outcomes=outcomes, mean=mean, std=spread)


def test_metrics_csv_layout(tmp_path):
    path = tmp_path / "metrics.csv"
    write_metrics_csv([_result("svdd+linear")], path)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "model,split,accu,tpr,tnr,pre,f1,gm"
    assert [line.split(",")[1] for line in lines[1:]] == ["0", "1", "mean", "std"]
    assert lines[1].startswith("svdd+linear,0,0.800000")


def test_metrics_frame_rows_per_model():
    frame = metrics_frame([_result("svdd+linear"), _result("ocsvm+rbf")])
    assert len(frame) == 8
    assert list(frame["model"].unique()) == ["svdd+linear", "ocsvm+rbf"]


def test_format_cell():
    assert format_cell(0.8, 0.05) == "0.80 ± 0.05"
    assert format_cell(0.912, 0.0) == "0.91 ± 0.00"


def test_markdown_groups_linear_and_kernel():
    text = markdown_table([_result("svdd+linear"), _result("ssvdd-gamma-knn+rbf", 0.9, 0.01)])
    lines = text.splitlines()
    assert lines[0] == "| Model | Accu | TPR | TNR | Pre | F1 | GM |"
    assert "**Linear OCC**" in lines[2]
    assert lines[3].startswith("| SVDD | 0.80 ± 0.05")
    assert "**Non-linear OCC**" in lines[4]
    assert lines[5].startswith("| SSVDDγL_kNN | 0.90 ± 0.01")


def test_markdown_skips_empty_group():
    text = markdown_table([_result("ocsvm+rbf")])
    assert "**Linear OCC**" not in text
    assert "**Non-linear OCC**" in text


def test_scores_csv(tmp_path):
    path = tmp_path / "scores.csv"
    scores = np.array([0.5, -1.25])
    write_scores_csv(scores, np.array([TARGET, OUTLIER]), np.array([TARGET, TARGET]), path)
    frame = pd.read_csv(path)
    assert list(frame.columns) == ["index", "score", "prediction", "label"]
    assert frame["prediction"].tolist() == ["target", "outlier"]
    assert frame["label"].tolist() == ["target", "target"]
    np.testing.assert_allclose(frame["score"], scores)


def test_sweep_csv(tmp_path):
    path = tmp_path / "sweep_k.csv"
    mean = {name: 0.7 for name in METRIC_NAMES}
    std = {name: 0.1 for name in METRIC_NAMES}
    write_sweep_csv([SweepRow("k", 2, mean, std), SweepRow("k", 3, mean, std)], path)
    frame = pd.read_csv(path)
    assert frame["value"].tolist() == [2, 3]
    assert "gm_std" in frame.columns


def test_docx_report_is_written(tmp_path):
    path = tmp_path / "report.docx"
    ExperimentReportGenerator().generate_report(
        [_result("svdd+linear"), _result("svdd+rbf", 0.9)],
        {"Dataset": "synthetic", "Seed": 0},
        str(path),
        failures={"ocsvm+rbf": "학습 실패"},
    )
    assert path.is_file() and path.stat().st_size > 0

    doc = Document(str(path))
    texts = [p.text for p in doc.paragraphs]
    assert "실패한 모델" in texts
    cells = [cell.text for table in doc.tables for row in table.rows for cell in row.cells]
    assert "0.90 ± 0.05" in cells


def test_docx_overwrite_leaves_no_temp_files(tmp_path):
    path = tmp_path / "report.docx"
    generator = ExperimentReportGenerator()
    generator.generate_report([_result("svdd+linear")], {"Seed": 0}, str(path))
    generator.generate_report([_result("svdd+linear", 0.6)], {"Seed": 1}, str(path))
    assert [p.name for p in tmp_path.iterdir()] == ["report.docx"]
    cells = [cell.text for table in Document(str(path)).tables for row in table.rows for cell in row.cells]
    assert "0.60 ± 0.05" in cells


def test_failed_save_keeps_previous_file(tmp_path):
    path = tmp_path / "report.docx"
    path.write_bytes(b"old")

    def broken(tmp_name):
        with open(tmp_name, "wb") as f:
            f.write(b"partial")
        raise OSError("disk full")

    with pytest.raises(OSError):
        atomic_save(path, broken)
    assert path.read_bytes() == b"old"
    assert [p.name for p in tmp_path.iterdir()] == ["report.docx"]
