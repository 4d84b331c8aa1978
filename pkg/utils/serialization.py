"""
모델 파일 저장 / 로드 (JSON, format = occ-model/1)
- 정규화 통계, NPT 사상, 투영 행렬, 쌍대 계수를 모두 포함
"""
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from evaluation.pipeline import OneClassPipeline
from models.ocsvm import OcsvmModel
from models.ssvdd import IterationRecord, RegularizerSpec, SsvddModel
from models.svdd import SvddModel
from utils.dataset import NormalizationStats
from utils.errors import ModelFormatError
from utils.kernel_npt import NptMap

logger = logging.getLogger(__name__)

MODEL_FORMAT = "occ-model/1"


def atomic_save(path, save: Callable[[str], Any]):
    """save(임시 경로) 로 같은 디렉터리의 임시 파일에 쓴 뒤 rename"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    os.close(fd)
    try:
        save(tmp_name)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def atomic_write_text(path, text: str):
    def _write(tmp_name: str):
        with open(tmp_name, "w", encoding="utf-8", newline="") as f:
            f.write(text)

    atomic_save(path, _write)


def _svdd_record(model: SvddModel) -> Dict[str, Any]:
    return {
        "type": "svdd",
        "alpha": model.alpha.tolist(),
        "C": model.C,
        "radius_sq": model.radius_sq,
        "train_data": model.train_data.tolist(),
        "objective": model.objective,
        "n_iter": model.n_iter,
    }


def _svdd_from_record(record: Dict[str, Any]) -> SvddModel:
    return SvddModel(
        alpha=np.asarray(record["alpha"], dtype=float),
        C=float(record["C"]),
        radius_sq=float(record["radius_sq"]),
        train_data=np.atleast_2d(np.asarray(record["train_data"], dtype=float)),
        objective=float(record["objective"]),
        n_iter=int(record.get("n_iter", 0)),
    )


def model_to_record(model) -> Dict[str, Any]:
    if isinstance(model, SvddModel):
        return _svdd_record(model)
    if isinstance(model, OcsvmModel):
        return {
            "type": "ocsvm",
            "alpha": model.alpha.tolist(),
            "nu": model.nu,
            "rho": model.rho,
            "train_data": model.train_data.tolist(),
            "objective": model.objective,
            "n_iter": model.n_iter,
        }
    if isinstance(model, SsvddModel):
        return {
            "type": "ssvdd",
            "Q": model.Q.tolist(),
            "spec": {"kind": model.spec.kind, "beta": model.spec.beta, "param": model.spec.param},
            "eta": model.eta,
            "d": model.d,
            "n_iters": model.n_iters,
            "history": [[h.iteration, h.objective, h.radius_sq] for h in model.history],
            "inner": _svdd_record(model.inner),
        }
    raise ModelFormatError(f"직렬화할 수 없는 모델 타입: {type(model).__name__}")


def model_from_record(record: Dict[str, Any]):
    kind = record.get("type")
    if kind == "svdd":
        return _svdd_from_record(record)
    if kind == "ocsvm":
        return OcsvmModel(
            alpha=np.asarray(record["alpha"], dtype=float),
            nu=float(record["nu"]),
            rho=float(record["rho"]),
            train_data=np.atleast_2d(np.asarray(record["train_data"], dtype=float)),
            objective=float(record["objective"]),
            n_iter=int(record.get("n_iter", 0)),
        )
    if kind == "ssvdd":
        spec = record["spec"]
        return SsvddModel(
            Q=np.atleast_2d(np.asarray(record["Q"], dtype=float)),
            inner=_svdd_from_record(record["inner"]),
            spec=RegularizerSpec(kind=spec["kind"], beta=float(spec["beta"]), param=spec["param"]),
            eta=float(record["eta"]),
            d=int(record["d"]),
            n_iters=int(record["n_iters"]),
            history=[IterationRecord(int(i), float(o), float(r)) for i, o, r in record["history"]],
        )
    raise ModelFormatError(f"알 수 없는 모델 타입: {kind}")


def _plain(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    return float(value)


def pipeline_to_record(pipeline: OneClassPipeline, feature_names: Optional[List[str]] = None) -> Dict[str, Any]:
    npt = pipeline.npt
    normalizer = pipeline.normalizer
    return {
        "format": MODEL_FORMAT,
        "kind": pipeline.kind,
        "kernel": pipeline.kernel,
        "params": {name: _plain(value) for name, value in pipeline.params.items()},
        "seed": pipeline.seed,
        "n_iters": pipeline.n_iters,
        "init": pipeline.init,
        "feature_names": list(feature_names or pipeline.feature_names),
        "normalizer": None if normalizer is None else {
            "mean": normalizer.mean.tolist(),
            "std": normalizer.std.tolist(),
        },
        "npt": None if npt is None else {
            "sigma": npt.sigma,
            "train_data": npt.train_data.tolist(),
            "eigvals": npt.eigvals.tolist(),
            "eigvecs": npt.eigvecs.tolist(),
            "column_means": npt.column_means.tolist(),
            "total_mean": npt.total_mean,
        },
        "model": model_to_record(pipeline.model),
    }


def pipeline_from_record(record: Dict[str, Any]) -> OneClassPipeline:
    if record.get("format") != MODEL_FORMAT:
        raise ModelFormatError(f"지원하지 않는 모델 형식: {record.get('format')}")
    try:
        normalizer = None
        if record["normalizer"] is not None:
            normalizer = NormalizationStats(
                mean=np.asarray(record["normalizer"]["mean"], dtype=float),
                std=np.asarray(record["normalizer"]["std"], dtype=float),
            )
        pipeline = OneClassPipeline(
            record["kind"],
            bool(record["kernel"]),
            record["params"],
            seed=int(record["seed"]),
            n_iters=int(record["n_iters"]),
            init=record["init"],
            normalizer=normalizer,
        )
        if record["npt"] is not None:
            npt = record["npt"]
            pipeline.npt = NptMap(
                train_data=np.atleast_2d(np.asarray(npt["train_data"], dtype=float)),
                sigma=float(npt["sigma"]),
                eigvals=np.asarray(npt["eigvals"], dtype=float),
                eigvecs=np.atleast_2d(np.asarray(npt["eigvecs"], dtype=float)),
                column_means=np.asarray(npt["column_means"], dtype=float),
                total_mean=float(npt["total_mean"]),
            )
        pipeline.model = model_from_record(record["model"])
        pipeline.feature_names = list(record.get("feature_names", []))
    except (KeyError, TypeError, ValueError) as e:
        raise ModelFormatError(f"모델 레코드가 손상되었습니다: {e}") from e
    return pipeline


def save_pipeline(pipeline: OneClassPipeline, path, feature_names: Optional[List[str]] = None) -> str:
    record = pipeline_to_record(pipeline, feature_names)
    atomic_write_text(path, json.dumps(record, ensure_ascii=False, indent=1))
    logger.info(f"모델 저장: {path}")
    return str(path)


def load_pipeline(path) -> OneClassPipeline:
    path = Path(path)
    if not path.is_file():
        raise ModelFormatError(f"모델 파일이 없습니다: {path}")
    try:
        record = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise ModelFormatError(f"모델 파일을 읽을 수 없습니다: {path} ({e})") from e
    if not isinstance(record, dict):
        raise ModelFormatError(f"모델 파일 형식 오류: {path}")
    return pipeline_from_record(record)
