"""Evaluation Package - 지표, 파이프라인, 교차검증, 실험 프로토콜"""

from .metrics import MetricsReport, compute_metrics
from .pipeline import ModelRecipe, OneClassPipeline
from .cross_validation import CVResult, cross_validate
from .experiment import ExperimentResult, run_experiment, run_sweep

__all__ = [
    "MetricsReport",
    "compute_metrics",
    "ModelRecipe",
    "OneClassPipeline",
    "CVResult",
    "cross_validate",
    "ExperimentResult",
    "run_experiment",
    "run_sweep",
]
