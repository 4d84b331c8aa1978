import numpy as np
import pytest

from config import AUTO_D_LADDER, QUICK_GRID
from evaluation.pipeline import ModelRecipe, OneClassPipeline, validate_model_kind
from models.ssvdd import SsvddModel
from models.svdd import SvddModel
from utils.dataset import OUTLIER, TARGET, fit_normalizer
from utils.errors import ConfigError, DataValidationError
from utils.kernel_npt import fit_npt, median_sigma_grid


class TestModelKinds:
    @pytest.mark.parametrize("name", ["esvdd", "GEOCSVM", "gesvdd"])
    def test_out_of_scope_baselines_are_rejected(self, name):
        with pytest.raises(ConfigError, match="out of scope"):
            validate_model_kind(name)

    def test_unknown_kind(self):
        with pytest.raises(ConfigError, match="알 수 없는"):
            validate_model_kind("svm")

    def test_labels(self):
        assert ModelRecipe("ssvdd-psi3", False, dict(QUICK_GRID)).label == "ssvdd-psi3+linear"
        assert ModelRecipe("svdd", True, dict(QUICK_GRID)).label == "svdd+rbf"


class TestModelRecipe:
    def test_kernel_adds_sigma(self):
        recipe = ModelRecipe("ssvdd-gamma-knn", True, dict(QUICK_GRID))
        assert recipe.parameter_names == ["C", "d", "eta", "beta", "k", "sigma"]

    def test_expand_auto_d_linear(self, rng):
        recipe = ModelRecipe("ssvdd-psi1", False, dict(QUICK_GRID, d="auto", C=[0.5]))
        points = recipe.expand_grid(rng.normal(size=(10, 3)))
        assert [p["d"] for p in points] == [1, 2, 3]

    def test_expand_auto_d_kernel_reaches_npt_rank(self, rng):
        X = rng.normal(size=(10, 3))
        recipe = ModelRecipe("ssvdd-psi1", True, dict(QUICK_GRID, d="auto", C=[0.5]))
        points = recipe.expand_grid(X)

        sigmas = median_sigma_grid(X)
        rank = max(fit_npt(X, s).rank for s in sigmas)
        dims = sorted({p["d"] for p in points})
        assert rank > X.shape[1]
        assert dims == [d for d in AUTO_D_LADDER if d < rank] + [rank]
        assert len({p["sigma"] for p in points}) == 5
        assert len(points) == len(dims) * 5

    def test_empty_grid_is_rejected(self):
        with pytest.raises(ConfigError, match="grid.C"):
            ModelRecipe("svdd", False, dict(QUICK_GRID, C=[]))

    def test_invalid_value_is_rejected(self, rng):
        recipe = ModelRecipe("ocsvm", False, dict(QUICK_GRID, nu=[1.5]))
        with pytest.raises(ConfigError, match="grid.nu"):
            recipe.expand_grid(rng.normal(size=(5, 2)))

    def test_with_grid_overrides_single_parameter(self):
        recipe = ModelRecipe("svdd", False, dict(QUICK_GRID)).with_grid({"C": [0.7]})
        assert recipe.grid["C"] == [0.7]
        assert recipe.grid["nu"] == QUICK_GRID["nu"]


class TestOneClassPipeline:
    def test_linear_svdd(self, blob_dataset):
        pipeline = OneClassPipeline("svdd", False, {"C": 0.2}).fit(blob_dataset.targets())
        assert isinstance(pipeline.model, SvddModel)
        predictions = pipeline.predict(blob_dataset.features)
        assert np.mean(predictions[blob_dataset.labels == OUTLIER] == OUTLIER) > 0.9

    def test_kernel_ssvdd_with_normalizer(self, blob_dataset):
        stats = fit_normalizer(blob_dataset)
        params = {"C": 0.2, "d": 2, "eta": 0.01, "beta": 0.01, "k": 3, "sigma": 1.5}
        pipeline = OneClassPipeline(
            "ssvdd-gamma-knn", True, params, n_iters=3, normalizer=stats
        ).fit(blob_dataset.targets())
        assert isinstance(pipeline.model, SsvddModel)
        assert pipeline.npt.rank >= 2
        scores = pipeline.decision_function(blob_dataset.features)
        assert scores.shape == (blob_dataset.n_samples,)
        assert pipeline.n_input_features == 3
        summary = pipeline.summary()
        assert summary["model"] == "ssvdd-gamma-knn+rbf"
        assert len(summary["history"]) == 3

    def test_d_is_clipped_to_representation(self, rng, caplog):
        params = {"C": 0.5, "d": 10, "eta": 0.0, "beta": 0.0, "k": 2}
        pipeline = OneClassPipeline("ssvdd-gamma-knn", False, params, n_iters=1)
        pipeline.fit(rng.normal(size=(8, 3)))
        assert pipeline.model.d == 3
        assert "줄입니다" in caplog.text

    def test_k_larger_than_samples(self, rng):
        params = {"C": 0.5, "d": 1, "eta": 0.0, "beta": 0.1, "k": 8}
        with pytest.raises(DataValidationError, match="k=8"):
            OneClassPipeline("ssvdd-gamma-knn", False, params).fit(rng.normal(size=(5, 2)))

    def test_ocsvm_predictions_are_labels(self, blob_dataset):
        pipeline = OneClassPipeline("ocsvm", True, {"nu": 0.1, "sigma": 2.0}).fit(blob_dataset.targets())
        assert set(np.unique(pipeline.predict(blob_dataset.features))) <= {TARGET, OUTLIER}

    def test_unfitted_pipeline(self):
        with pytest.raises(DataValidationError):
            OneClassPipeline("svdd", False, {"C": 0.5}).decision_function(np.zeros((1, 2)))
