"""
단일 클래스 분류 툴킷 - 신뢰 / 비신뢰 사용자 분류
- main.py는 오케스트레이터 역할만 수행
- 모델 학습 / 평가 / 실험 프로토콜은 models/, evaluation/에 위임
- Utils는 순수 도구로 사용 (데이터 로드, 결과 파일 작성)

사용 예:
    python main.py train --model ssvdd-gamma-knn --kernel rbf --data users.csv --label label --positive trusted
    python main.py evaluate --model-file outputs/model.json --data test.csv
    python main.py experiment --data users.csv --config run.cfg
    python main.py sweep --model ssvdd-gamma-knn --kernel rbf --sweep-param k --sweep-values 2..10 --data users.csv
    python main.py synth --out outputs
"""
import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from dotenv import dotenv_values, load_dotenv

load_dotenv(override=True)

# Config
from config import GRID_PRESETS, KERNEL_CHOICES, MODEL_KINDS, PROTOCOL_DEFAULTS, SSVDD_DEFAULTS

# Evaluation (학습 / 실험)
from evaluation.cross_validation import cross_validate
from evaluation.experiment import ExperimentResult, SweepRow, run_experiment, run_sweep
from evaluation.metrics import MetricsReport, compute_metrics
from evaluation.pipeline import ModelRecipe, OneClassPipeline, validate_model_kind

# Utils (도구)
from utils import (
    ConfigError,
    DataValidationError,
    OCCError,
    apply_normalizer,
    fit_normalizer,
    load_csv,
    make_split_plan,
    make_synthetic_benchmark,
)
from utils.dataset import OUTLIER, TARGET, Dataset, write_dataset_csv
from utils.docx_generator import ExperimentReportGenerator
from utils.report_writer import (
    markdown_table,
    write_markdown_table,
    write_metrics_csv,
    write_report_csv,
    write_scores_csv,
    write_sweep_csv,
)
from utils.serialization import atomic_write_text, load_pipeline, save_pipeline

logger = logging.getLogger(__name__)

INT_PARAMS = ("d", "k", "n_clusters")
KEYWORD_VALUES = {"d": "auto", "sigma": "median"}


def _parse_number(key: str, raw: str, as_int: bool):
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(f"{key}: 숫자가 아닙니다 '{raw}'")
    if not np.isfinite(value):
        raise ConfigError(f"{key}: 유한한 값이어야 합니다 '{raw}'")
    if as_int:
        if value != int(value):
            raise ConfigError(f"{key}: 정수가 아닙니다 '{raw}'")
        return int(value)
    return value


def parse_value_list(key: str, raw: str, as_int: bool) -> list:
    """
    쉼표 목록 파싱
    - "0.1,0.2,0.5"
    - 정수 파라미터는 "2..10" 범위 표기 허용
    """
    raw = raw.strip()
    if as_int and ".." in raw and "," not in raw:
        lo, hi = raw.split("..", 1)
        lo, hi = _parse_number(key, lo, True), _parse_number(key, hi, True)
        if hi < lo:
            raise ConfigError(f"{key}: 범위가 비어 있습니다 '{raw}'")
        return list(range(lo, hi + 1))
    values = [part.strip() for part in raw.split(",") if part.strip()]
    if not values:
        raise ConfigError(f"{key}: 값이 비어 있습니다")
    return [_parse_number(key, v, as_int) for v in values]


@dataclass
class RunConfig:
    """실행 설정 (설정 파일의 dotted key=value + 명령행 플래그, 플래그 우선)"""
    data: Optional[Path] = None
    label: str = "label"
    positive: str = "trusted"
    models: List[str] = field(default_factory=list)
    kernel: Optional[str] = None
    seed: int = PROTOCOL_DEFAULTS["seed"]
    n_repeats: int = PROTOCOL_DEFAULTS["n_repeats"]
    train_fraction: float = PROTOCOL_DEFAULTS["train_fraction"]
    cv_folds: int = PROTOCOL_DEFAULTS["cv_folds"]
    split: Optional[int] = None
    grid_preset: str = "default"
    grid_overrides: Dict[str, Any] = field(default_factory=dict)
    n_iters: int = SSVDD_DEFAULTS["n_iters"]
    init: str = SSVDD_DEFAULTS["init"]
    out: Path = Path("outputs")
    threads: Optional[int] = None
    sweep_param: Optional[str] = None
    sweep_values: Optional[str] = None

    @classmethod
    def from_sources(cls, config_path: Optional[str], overrides: Dict[str, str]) -> "RunConfig":
        values: Dict[str, str] = {}
        if config_path:
            path = Path(config_path)
            if not path.is_file():
                raise ConfigError(f"config: 설정 파일이 없습니다: {path}")
            values.update({k: v for k, v in dotenv_values(path).items() if v is not None})
        values.update(overrides)

        config = cls()
        for key, raw in values.items():
            config._apply(key.strip(), str(raw).strip())
        return config

    def _apply(self, key: str, raw: str):
        if key.startswith("grid.") and key != "grid.preset":
            name = key[len("grid."):]
            if name not in GRID_PRESETS["default"]:
                raise ConfigError(f"{key}: 알 수 없는 하이퍼파라미터")
            if KEYWORD_VALUES.get(name) == raw:
                self.grid_overrides[name] = raw
            else:
                self.grid_overrides[name] = parse_value_list(key, raw, name in INT_PARAMS)
            return

        if key == "data.path":
            self.data = Path(raw)
        elif key == "data.label":
            self.label = raw
        elif key == "data.positive":
            self.positive = raw
        elif key == "model.kind":
            self.models = [validate_model_kind(k) for k in raw.split(",") if k.strip()]
        elif key == "model.kernel":
            if raw not in (*KERNEL_CHOICES, "both"):
                raise ConfigError(f"{key}: none / rbf / both 중 하나여야 합니다 ('{raw}')")
            self.kernel = raw
        elif key == "model.n_iters":
            self.n_iters = _parse_number(key, raw, True)
        elif key == "model.init":
            if raw not in ("pca", "random"):
                raise ConfigError(f"{key}: pca / random 중 하나여야 합니다 ('{raw}')")
            self.init = raw
        elif key == "split.seed":
            self.seed = _parse_number(key, raw, True)
        elif key == "split.repeats":
            self.n_repeats = _parse_number(key, raw, True)
        elif key == "split.fraction":
            self.train_fraction = _parse_number(key, raw, False)
        elif key == "split.index":
            self.split = _parse_number(key, raw, True)
        elif key == "cv.folds":
            self.cv_folds = _parse_number(key, raw, True)
        elif key == "grid.preset":
            if raw not in GRID_PRESETS:
                raise ConfigError(f"{key}: 알 수 없는 프리셋 '{raw}' (가능: {', '.join(GRID_PRESETS)})")
            self.grid_preset = raw
        elif key == "output.dir":
            self.out = Path(raw)
        elif key == "run.threads":
            self.threads = _parse_number(key, raw, True)
        elif key == "sweep.param":
            self.sweep_param = raw
        elif key == "sweep.values":
            self.sweep_values = raw
        else:
            raise ConfigError(f"{key}: 알 수 없는 설정 키")

    def resolve_sweep_values(self) -> List[float]:
        if self.sweep_values is None:
            raise ConfigError("sweep.values: 스윕 값이 지정되지 않았습니다")
        return parse_value_list("sweep.values", self.sweep_values, self.sweep_param in INT_PARAMS)

    def require_data(self) -> Path:
        if self.data is None:
            raise ConfigError("data.path: 데이터 파일이 지정되지 않았습니다")
        if not self.data.is_file():
            raise ConfigError(f"data.path: 데이터 파일이 없습니다: {self.data}")
        return self.data

    def grid(self) -> Dict[str, Any]:
        grid = dict(GRID_PRESETS[self.grid_preset])
        grid.update(self.grid_overrides)
        return grid

    def kernel_flags(self, default: str) -> List[bool]:
        return {"none": [False], "rbf": [True], "both": [False, True]}[self.kernel or default]

    def recipes(self, default_kernel: str) -> List[ModelRecipe]:
        """모델 종류 순서대로, 선형 -> 커널"""
        kinds = self.models or list(MODEL_KINDS)
        grid = self.grid()
        return [
            ModelRecipe(kind, kernel, grid, n_iters=self.n_iters, init=self.init)
            for kernel in self.kernel_flags(default_kernel)
            for kind in kinds
        ]

    def single_recipe(self, command: str) -> ModelRecipe:
        if len(self.models) != 1:
            raise ConfigError(f"model.kind: '{command}' 는 모델 종류 하나가 필요합니다")
        kernels = self.kernel_flags("rbf")
        if len(kernels) != 1:
            raise ConfigError(f"model.kernel: '{command}' 는 none / rbf 중 하나가 필요합니다")
        return ModelRecipe(self.models[0], kernels[0], self.grid(), n_iters=self.n_iters, init=self.init)


def _json_default(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"JSON 직렬화 불가: {type(value).__name__}")


class OneClassToolkit:
    """단일 클래스 분류 툴킷 - 오케스트레이터"""

    def __init__(self, config: RunConfig):
        self.config = config
        self.out_dir = Path(config.out)
        self.report_generator = ExperimentReportGenerator()

    def _banner(self, title: str):
        print("\n" + "=" * 80)
        print(title)
        print("=" * 80)

    def _load_training_data(self) -> Dataset:
        config = self.config
        dataset = load_csv(config.require_data(), config.label, config.positive, purpose="train")
        counts = dataset.class_counts()
        print(f"   ✅ 데이터 로드: {dataset.n_samples}행 × {dataset.n_features}열 "
              f"(target {counts['target']}, outlier {counts['outlier']})")
        return dataset

    def _make_plan(self, dataset: Dataset):
        config = self.config
        return make_split_plan(dataset, config.seed, config.n_repeats, config.train_fraction)

    # ------------------------------------------------------------------ train

    def cmd_train(self) -> Dict[str, str]:
        """CV 로 하이퍼파라미터 선택 -> 타깃 행으로 학습 -> 모델 파일 + 학습 로그"""
        config = self.config
        recipe = config.single_recipe("train")
        self._banner(f"🔨 모델 학습: {recipe.label}")
        started = time.perf_counter()

        dataset = self._load_training_data()
        if config.split is not None:
            plan = self._make_plan(dataset)
            if not 0 <= config.split < len(plan.splits):
                raise ConfigError(f"split.index: 0..{len(plan.splits) - 1} 범위여야 합니다 ({config.split})")
            train = dataset.subset(plan.splits[config.split][0])
            print(f"   📊 분할 {config.split} 의 학습 부분 사용: {train.n_samples}행")
        else:
            train = dataset

        stats = fit_normalizer(train)
        cv = cross_validate(
            apply_normalizer(stats, train), recipe, k=config.cv_folds, seed=config.seed, n_jobs=config.threads
        )
        print(f"   ✅ 하이퍼파라미터 선택: {cv.best_params}")

        pipeline = OneClassPipeline(
            recipe.kind,
            recipe.kernel,
            cv.best_params,
            seed=config.seed,
            n_iters=recipe.n_iters,
            init=recipe.init,
            normalizer=stats,
        )
        try:
            pipeline.fit(train.targets())
        except FloatingPointError as e:
            raise OCCError(f"{recipe.label} 학습 실패: {e}") from e
        pipeline.feature_names = list(dataset.feature_names)

        model_path = self.out_dir / "model.json"
        log_path = self.out_dir / "train_log.json"
        save_pipeline(pipeline, model_path)

        log = pipeline.summary()
        log.update(
            dataset=str(config.data),
            n_train=train.n_samples,
            n_train_targets=int(train.targets().shape[0]),
            cv=[{"params": s.params, "fold_gm": list(s.fold_gms)} for s in cv.scores],
            elapsed_sec=round(time.perf_counter() - started, 3),
        )
        atomic_write_text(log_path, json.dumps(log, ensure_ascii=False, indent=2, default=_json_default))

        print(f"\n✅ 학습 완료: {recipe.label}")
        print(f"   모델: {model_path}")
        print(f"   로그: {log_path}")
        return {"model": str(model_path), "log": str(log_path)}

    # --------------------------------------------------------------- evaluate

    def cmd_evaluate(self, model_path: str, data_path: str) -> MetricsReport:
        """저장된 모델로 데이터셋 평가 -> 지표 출력 + 샘플별 점수 CSV"""
        config = self.config
        self._banner("📊 모델 평가")
        pipeline = load_pipeline(model_path)
        if not Path(data_path).is_file():
            raise DataValidationError(f"데이터 파일이 없습니다: {data_path}")
        dataset = load_csv(data_path, config.label, config.positive, purpose="evaluate")

        expected = pipeline.n_input_features
        if expected is not None and dataset.n_features != expected:
            raise DataValidationError(
                f"특징 수 불일치: 모델 D={expected}, 데이터 D={dataset.n_features} ({data_path})"
            )
        if pipeline.feature_names and pipeline.feature_names != dataset.feature_names:
            logger.warning("특징 이름이 학습 시와 다릅니다 (열 순서를 확인하세요)")

        scores = pipeline.decision_function(dataset.features)
        predictions = np.where(scores >= 0, TARGET, OUTLIER)
        report = compute_metrics(predictions, dataset.labels)

        print(f"   모델: {pipeline.label}  ({dataset.n_samples}개 샘플)")
        for name, value in report.metric_values().items():
            print(f"   {name:>5}: {value:.4f}")

        scores_path = write_scores_csv(scores, predictions, dataset.labels, self.out_dir / "scores.csv")
        metrics_path = write_report_csv(pipeline.label, report, self.out_dir / "eval_metrics.csv")
        print(f"\n✅ 점수 CSV: {scores_path}")
        print(f"✅ 지표 CSV: {metrics_path}")
        return report

    # ------------------------------------------------------------- experiment

    def cmd_experiment(self) -> Tuple[List[ExperimentResult], Dict[str, str]]:
        """모든 요청 모델 × (선형, 커널) 에 대해 반복 분할 실험"""
        config = self.config
        recipes = config.recipes(default_kernel="both")
        self._banner(f"🎬 실험 시작: {len(recipes)}개 모델, {config.n_repeats}회 분할, seed={config.seed}")

        dataset = self._load_training_data()
        plan = self._make_plan(dataset)

        results: List[ExperimentResult] = []
        failures: Dict[str, str] = {}
        for i, recipe in enumerate(recipes, start=1):
            print(f"\n[{i}/{len(recipes)}] {recipe.label}")
            try:
                result = run_experiment(
                    dataset, recipe, plan, k=config.cv_folds, seed=config.seed, n_jobs=config.threads
                )
            except (OCCError, FloatingPointError) as e:
                failures[recipe.label] = str(e)
                print(f"   ❌ 실패: {e}")
                continue
            results.append(result)
            print(f"   ✅ GM {result.mean['gm']:.4f} ± {result.std['gm']:.4f}, "
                  f"Accu {result.mean['accu']:.4f} ± {result.std['accu']:.4f}")

        self._banner("📊 결과 파일 생성 중...")
        self.out_dir.mkdir(parents=True, exist_ok=True)
        csv_path = write_metrics_csv(results, self.out_dir / "metrics.csv")
        md_path = write_markdown_table(results, self.out_dir / "results.md")
        docx_path = self.report_generator.generate_report(
            results,
            run_info={
                "Dataset": config.data,
                "Samples": f"{dataset.n_samples} (target {dataset.class_counts()['target']}, "
                           f"outlier {dataset.class_counts()['outlier']})",
                "Splits": f"{config.n_repeats} × {config.train_fraction:.0%} train",
                "CV folds": config.cv_folds,
                "Grid preset": config.grid_preset,
                "Seed": config.seed,
            },
            output_path=str(self.out_dir / "report.docx"),
            failures=failures,
        )
        print(f"   ✅ 지표 CSV: {csv_path}")
        print(f"   ✅ 결과 표: {md_path}")
        print(f"   ✅ DOCX 보고서: {docx_path}")
        if results:
            print("\n" + markdown_table(results))
        if failures:
            print(f"⚠️ 실패한 모델 {len(failures)}개: {', '.join(failures)}")
        return results, failures

    # ------------------------------------------------------------------ sweep

    def cmd_sweep(self) -> List[SweepRow]:
        """한 하이퍼파라미터를 바꿔 가며 반복 평균 지표 (플롯용 CSV)"""
        config = self.config
        recipe = config.single_recipe("sweep")
        if not config.sweep_param:
            raise ConfigError("sweep.param: 스윕할 파라미터가 지정되지 않았습니다")
        values = config.resolve_sweep_values()
        self._banner(f"📈 스윕: {recipe.label}, {config.sweep_param} ∈ {values}")

        dataset = self._load_training_data()
        plan = self._make_plan(dataset)
        rows = run_sweep(
            dataset,
            recipe,
            plan,
            config.sweep_param,
            values,
            k=config.cv_folds,
            seed=config.seed,
            n_jobs=config.threads,
        )
        for row in rows:
            print(f"   {row.param}={row.value}: GM {row.mean['gm']:.4f} ± {row.std['gm']:.4f}")

        path = write_sweep_csv(rows, self.out_dir / f"sweep_{config.sweep_param}.csv")
        print(f"\n✅ 스윕 CSV: {path}")
        return rows

    # ------------------------------------------------------------------ synth

    def cmd_synth(self, n_target: int, n_outlier: int) -> str:
        """합성 벤치마크 CSV 생성 (데모 / 스모크 테스트용)"""
        dataset = make_synthetic_benchmark(n_target, n_outlier, seed=self.config.seed)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        path = self.out_dir / "synthetic.csv"
        write_dataset_csv(dataset, path, label_column=self.config.label)
        print(f"✅ 합성 데이터: {path} ({n_target} target + {n_outlier} outlier)")
        return str(path)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="One-class classification toolkit (SVDD / SSVDD / OCSVM)")
    parser.add_argument("--verbose", action="store_true", help="DEBUG 로그 출력")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser):
        p.add_argument("--config", help="dotted key=value 설정 파일 (예: split.seed=42)")
        p.add_argument("--data", help="CSV 데이터 파일")
        p.add_argument("--label", help="레이블 열 이름")
        p.add_argument("--positive", help="타깃(신뢰) 클래스 값")
        p.add_argument("--seed", type=int)
        p.add_argument("--out", help="출력 디렉터리")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="임의 설정 키 덮어쓰기 (예: grid.C=0.1,0.2)")

    def modelling(p: argparse.ArgumentParser):
        p.add_argument("--model", help="모델 종류 (쉼표로 여러 개)")
        p.add_argument("--kernel", choices=[*KERNEL_CHOICES, "both"])
        p.add_argument("--no-kernel", action="store_const", const="none", dest="kernel")
        p.add_argument("--grid-preset", choices=list(GRID_PRESETS))
        p.add_argument("--repeats", type=int)
        p.add_argument("--folds", type=int)
        p.add_argument("--threads", type=int)

    train = sub.add_parser("train", help="모델 학습 + 저장")
    common(train)
    modelling(train)
    train.add_argument("--split", type=int, help="이 분할의 학습 부분만 사용")

    evaluate = sub.add_parser("evaluate", help="저장된 모델 평가")
    common(evaluate)
    evaluate.add_argument("--model-file", required=True)

    experiment = sub.add_parser("experiment", help="반복 분할 실험 (결과 표)")
    common(experiment)
    modelling(experiment)
    experiment.add_argument("--models", dest="model", help="--model 과 동일")

    sweep = sub.add_parser("sweep", help="하이퍼파라미터 스윕 (플롯용 CSV)")
    common(sweep)
    modelling(sweep)
    sweep.add_argument("--sweep-param")
    sweep.add_argument("--sweep-values", help="쉼표 목록 또는 정수 범위 (예: 2..10)")

    synth = sub.add_parser("synth", help="합성 벤치마크 CSV 생성")
    common(synth)
    synth.add_argument("--n-target", type=int, default=300)
    synth.add_argument("--n-outlier", type=int, default=300)
    return parser


FLAG_KEYS = {
    "data": "data.path",
    "label": "data.label",
    "positive": "data.positive",
    "seed": "split.seed",
    "out": "output.dir",
    "model": "model.kind",
    "kernel": "model.kernel",
    "grid_preset": "grid.preset",
    "repeats": "split.repeats",
    "folds": "cv.folds",
    "threads": "run.threads",
    "split": "split.index",
    "sweep_param": "sweep.param",
    "sweep_values": "sweep.values",
}


def config_from_args(args: argparse.Namespace) -> RunConfig:
    overrides: Dict[str, str] = {}
    for item in args.set:
        if "=" not in item:
            raise ConfigError(f"--set: KEY=VALUE 형식이어야 합니다 ('{item}')")
        key, value = item.split("=", 1)
        overrides[key.strip()] = value
    for attr, key in FLAG_KEYS.items():
        value = getattr(args, attr, None)
        if value is not None:
            overrides[key] = str(value)
    return RunConfig.from_sources(args.config, overrides)


def main(argv: Optional[List[str]] = None) -> int:
    """메인 실행 함수 (종료 코드 반환)"""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )

    try:
        config = config_from_args(args)
        toolkit = OneClassToolkit(config)
        if args.command == "train":
            toolkit.cmd_train()
        elif args.command == "evaluate":
            toolkit.cmd_evaluate(args.model_file, str(config.require_data()))
        elif args.command == "experiment":
            _, failures = toolkit.cmd_experiment()
            if failures:
                return 1
        elif args.command == "sweep":
            toolkit.cmd_sweep()
        elif args.command == "synth":
            toolkit.cmd_synth(args.n_target, args.n_outlier)
    except OCCError as e:
        print(f"\n❌ 오류: {e}", file=sys.stderr)
        return 1

    print("\n✅ 모든 작업 완료!")
    return 0


if __name__ == "__main__":
    sys.exit(main())
