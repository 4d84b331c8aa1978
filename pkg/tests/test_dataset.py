import numpy as np
import pytest

from utils.dataset import (
    OUTLIER,
    TARGET,
    Dataset,
    NormalizationStats,
    apply_normalizer,
    fit_normalizer,
    kfold_indices,
    load_csv,
    make_split_plan,
    make_synthetic_benchmark,
    write_dataset_csv,
)
from utils.errors import DataValidationError, InfeasibleProblemError


def _dataset(n_target: int, n_outlier: int, d: int = 2, seed: int = 0) -> Dataset:
    rng = np.random.default_rng(seed)
    labels = np.concatenate([np.full(n_target, TARGET), np.full(n_outlier, OUTLIER)])
    return Dataset(rng.normal(size=(n_target + n_outlier, d)), labels)


class TestLoadCsv:
    def test_maps_positive_label_to_target(self, write_csv):
        path = write_csv(
            "f1,f2,label\n1,2,trusted\n3,4,untrusted\n5,6,trusted\n7,8,trusted\n"
        )
        dataset = load_csv(path, "label", "trusted")
        assert dataset.labels.tolist() == [TARGET, OUTLIER, TARGET, TARGET]
        assert dataset.feature_names == ["f1", "f2"]
        np.testing.assert_array_equal(dataset.features[1], [3.0, 4.0])

    def test_label_column_may_be_anywhere(self, write_csv):
        path = write_csv("label,x\ntrusted,0.5\nbot,1.5\n")
        dataset = load_csv(path, "label", "trusted")
        assert dataset.feature_names == ["x"]
        assert dataset.labels.tolist() == [TARGET, OUTLIER]

    def test_nan_cell_names_row_and_column(self, write_csv):
        path = write_csv("f1,f2,label\n1,2,trusted\n3,NaN,untrusted\n")
        with pytest.raises(DataValidationError, match=r"row=2, column='f2'"):
            load_csv(path, "label", "trusted")

    def test_non_numeric_cell(self, write_csv):
        path = write_csv("f1,label\nabc,trusted\n")
        with pytest.raises(DataValidationError, match="column='f1'"):
            load_csv(path, "label", "trusted")

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataValidationError, match="missing.csv"):
            load_csv(tmp_path / "missing.csv", "label", "trusted")

    def test_missing_label_column(self, write_csv):
        path = write_csv("f1,f2\n1,2\n")
        with pytest.raises(DataValidationError, match="'label'"):
            load_csv(path, "label", "trusted")

    def test_duplicate_header(self, write_csv):
        path = write_csv("f1,f1,label\n1,2,trusted\n")
        with pytest.raises(DataValidationError, match="중복"):
            load_csv(path, "label", "trusted")

    def test_numeric_first_row_is_not_a_header(self, write_csv):
        path = write_csv("1,2,3\n4,5,6\n")
        with pytest.raises(DataValidationError):
            load_csv(path, "label", "trusted")

    def test_header_only_file_is_rejected(self, write_csv):
        path = write_csv("f1,label\n")
        with pytest.raises(DataValidationError):
            load_csv(path, "label", "trusted")

    def test_empty_file_is_rejected(self, write_csv):
        path = write_csv("")
        with pytest.raises(DataValidationError):
            load_csv(path, "label", "trusted")

    def test_ragged_row_is_rejected(self, write_csv):
        path = write_csv("a,b,label\n1,2,t\n3,4,5,t\n")
        with pytest.raises(DataValidationError, match="CSV 형식 오류") as info:
            load_csv(path, "label", "t")
        assert str(path) in str(info.value)

    def test_invalid_utf8_is_rejected(self, tmp_path):
        path = tmp_path / "latin.csv"
        path.write_bytes(b"a,b,label\n1,2,t\n3,\xff4,u\n")
        with pytest.raises(DataValidationError, match="UTF-8") as info:
            load_csv(path, "label", "t")
        assert str(path) in str(info.value)

    def test_single_class_evaluation_file_warns(self, write_csv, caplog):
        path = write_csv("f1,label\n1,trusted\n2,trusted\n")
        dataset = load_csv(path, "label", "trusted", purpose="evaluate")
        assert dataset.class_counts() == {"target": 2, "outlier": 0}
        assert "한 클래스" in caplog.text

    def test_round_trip_through_writer(self, tmp_path):
        original = make_synthetic_benchmark(10, 6, seed=1)
        path = tmp_path / "synthetic.csv"
        write_dataset_csv(original, path)
        loaded = load_csv(path, "label", "trusted")
        np.testing.assert_allclose(loaded.features, original.features)
        np.testing.assert_array_equal(loaded.labels, original.labels)


class TestDataset:
    def test_arrays_are_read_only_copies(self):
        features = np.zeros((2, 2))
        dataset = Dataset(features, [TARGET, OUTLIER])
        features[0, 0] = 5.0
        assert dataset.features[0, 0] == 0.0
        with pytest.raises(ValueError):
            dataset.features[0, 0] = 1.0

    def test_rejects_unknown_label(self):
        with pytest.raises(DataValidationError):
            Dataset(np.zeros((2, 1)), [TARGET, 3])

    def test_rejects_non_finite_feature(self):
        with pytest.raises(DataValidationError):
            Dataset(np.array([[1.0], [np.inf]]), [TARGET, OUTLIER])


class TestSplitPlan:
    def test_stratified_sizes(self):
        dataset = _dataset(6, 4)
        plan = make_split_plan(dataset, seed=3, n_repeats=5, train_fraction=0.7)
        assert len(plan.splits) == 5
        for train_idx, test_idx in plan.splits:
            assert len(train_idx) == 7
            assert len(test_idx) == 3
            assert set(train_idx).isdisjoint(test_idx)
            assert sorted(set(train_idx) | set(test_idx)) == list(range(10))
            n_train_targets = int((dataset.labels[train_idx] == TARGET).sum())
            assert abs(n_train_targets - 6 * 0.7) <= 1

    def test_same_seed_same_indices(self):
        dataset = _dataset(20, 10)
        a = make_split_plan(dataset, seed=11)
        b = make_split_plan(dataset, seed=11)
        for (ta, sa), (tb, sb) in zip(a.splits, b.splits):
            np.testing.assert_array_equal(ta, tb)
            np.testing.assert_array_equal(sa, sb)

    def test_large_protocol_gives_distinct_splits(self):
        dataset = _dataset(600, 400, d=1)
        plan = make_split_plan(dataset, seed=0, n_repeats=5, train_fraction=0.7)
        assert all(len(tr) == 700 and len(te) == 300 for tr, te in plan.splits)
        assert len({tuple(tr) for tr, _ in plan.splits}) == 5

    def test_too_few_outliers(self):
        with pytest.raises(InfeasibleProblemError):
            make_split_plan(_dataset(5, 1), seed=0)

    def test_invalid_fraction(self):
        with pytest.raises(DataValidationError):
            make_split_plan(_dataset(5, 5), seed=0, train_fraction=1.0)


class TestNormalizer:
    def test_hand_example(self):
        train = Dataset(np.array([[0.0, 2.0], [2.0, 4.0]]), [TARGET, TARGET])
        stats = fit_normalizer(train)
        np.testing.assert_allclose(stats.mean, [1.0, 3.0])
        np.testing.assert_allclose(stats.std, [1.0, 1.0])

    def test_single_row_uses_unit_std(self):
        stats = fit_normalizer(Dataset(np.array([[5.0, 5.0]]), [TARGET]))
        np.testing.assert_allclose(stats.mean, [5.0, 5.0])
        np.testing.assert_allclose(stats.std, [1.0, 1.0])

    def test_outliers_are_ignored(self):
        features = np.array([[0.0], [2.0], [100.0]])
        stats = fit_normalizer(Dataset(features, [TARGET, TARGET, OUTLIER]))
        np.testing.assert_allclose(stats.mean, [1.0])
        np.testing.assert_allclose(stats.std, [1.0])

    def test_no_targets(self):
        with pytest.raises(DataValidationError):
            fit_normalizer(Dataset(np.zeros((2, 1)), [OUTLIER, OUTLIER]))

    def test_apply_hand_example(self):
        stats = NormalizationStats(mean=np.array([1.0, 3.0]), std=np.array([1.0, 1.0]))
        out = apply_normalizer(stats, Dataset(np.array([[0.0, 2.0]]), [TARGET]))
        np.testing.assert_allclose(out.features, [[-1.0, -1.0]])

    def test_training_targets_have_zero_mean(self, blob_dataset):
        stats = fit_normalizer(blob_dataset)
        normalized = apply_normalizer(stats, blob_dataset)
        np.testing.assert_allclose(normalized.targets().mean(axis=0), 0.0, atol=1e-12)
        np.testing.assert_allclose(normalized.targets().std(axis=0), 1.0, atol=1e-12)

    def test_identity_stats(self, blob_dataset):
        stats = NormalizationStats(mean=np.zeros(3), std=np.ones(3))
        out = apply_normalizer(stats, blob_dataset)
        np.testing.assert_array_equal(out.features, blob_dataset.features)

    def test_dimension_mismatch(self, blob_dataset):
        stats = NormalizationStats(mean=np.zeros(2), std=np.ones(2))
        with pytest.raises(DataValidationError, match="차원"):
            apply_normalizer(stats, blob_dataset)


class TestKFold:
    def test_ten_samples_five_folds(self):
        dataset = _dataset(5, 5)
        folds = kfold_indices(dataset, k=5, seed=0)
        assert len(folds) == 5
        assert all(len(val) == 2 for _, val in folds)

    def test_partition_property(self, blob_dataset):
        folds = kfold_indices(blob_dataset, k=5, seed=2)
        validated = np.concatenate([val for _, val in folds])
        assert sorted(validated.tolist()) == list(range(blob_dataset.n_samples))
        for fit_idx, val_idx in folds:
            assert set(fit_idx).isdisjoint(val_idx)
            assert len(fit_idx) + len(val_idx) == blob_dataset.n_samples
            n_val_targets = int((blob_dataset.labels[val_idx] == TARGET).sum())
            assert abs(n_val_targets - 30 / 5) <= 1

    def test_class_smaller_than_k(self):
        with pytest.raises(InfeasibleProblemError):
            kfold_indices(_dataset(10, 3), k=5, seed=0)
