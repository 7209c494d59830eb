"""
Тесты разбиения датасета, цикла обучения и оценки.

Покрывает:
- split_dataset / load_split: разбиение по записям и по клипам
- EarlyStopping: закон остановки и восстановление лучших весов
- TrainingService: история эпох, файл метрик, ошибки конфигурации
- evaluate: точность, потеря, матрица ошибок
"""

import math
from types import SimpleNamespace

import numpy as np
import pytest

from raganet.core.exceptions import (
    ConfigHashMismatchError,
    DimensionError,
    EmptyDatasetError,
    ManifestError,
    NonFiniteError,
    SplitError,
    TrainConfigError,
)
from raganet.models.network import Network, build_model_config
from raganet.repositories.checkpoints import load_model, save_model
from raganet.repositories.features import FeatureRepository
from raganet.repositories.metrics import MetricsRepository
from raganet.schemas.model import ArchitectureConfig
from raganet.schemas.notes import LabelMap
from raganet.schemas.training import EvaluationResult, ManifestRow, TrainConfig
from raganet.services.dataset_service import FeatureDataset, load_dataset
from raganet.services.training_service import (
    EarlyStopping,
    TrainingService,
    evaluate,
    load_split,
    split_dataset,
    train_model,
)
from tests.shared.fixtures.dataset_fixtures import write_feature_rows


def manifest(recordings: dict[str, int], clips_per_recording: int = 1) -> list[ManifestRow]:
    rows = []
    for raga, count in recordings.items():
        for r in range(count):
            for c in range(clips_per_recording):
                rows.append(ManifestRow(path=f"{raga}/{r}_{c}.wav", raga=raga, recording_id=f"{raga}-{r}"))
    return rows


def train_config(**overrides) -> TrainConfig:
    values = {"epochs": 30, "patience": 30, "batch_size": 4, "learning_rate": 0.01, "record_timing": False}
    values.update(overrides)
    return TrainConfig(**values)


def dense_architecture() -> ArchitectureConfig:
    return ArchitectureConfig(conv_filters=4, kernel_size=3, pool_size=2, lstm_units=5, dense_units=(6,), dropout=0.0)


@pytest.mark.unit
class TestSplitDataset:
    """Тесты для split_dataset"""

    def test_recording_level_proportions(self):
        rows = manifest({"Kalyani": 10, "Todi": 10}, clips_per_recording=3)

        train, val = split_dataset(rows, TrainConfig())

        for raga in ("Kalyani", "Todi"):
            assert len({row.recording_id for row in train if row.raga == raga}) == 8
            assert len({row.recording_id for row in val if row.raga == raga}) == 2
        assert len(train) + len(val) == len(rows)

    def test_no_recording_on_both_sides(self):
        rng = np.random.default_rng(11)
        for seed in range(20):
            recordings = {f"raga{k}": int(rng.integers(2, 9)) for k in range(4)}
            rows = manifest(recordings, clips_per_recording=int(rng.integers(1, 4)))

            train, val = split_dataset(rows, TrainConfig(seed=seed))

            assert not {row.recording_id for row in train} & {row.recording_id for row in val}

    def test_same_seed_same_split(self):
        rows = manifest({"Kalyani": 7, "Todi": 5})

        first = split_dataset(rows, TrainConfig(seed=3))
        second = split_dataset(rows, TrainConfig(seed=3))

        assert first == second

    def test_keeps_manifest_order(self):
        rows = manifest({"Todi": 6, "Kalyani": 6})

        train, val = split_dataset(rows, TrainConfig())

        assert train == [row for row in rows if row in train]
        assert val == [row for row in rows if row in val]

    def test_both_sides_get_a_recording(self):
        """Доля 0.95 от двух записей: одна в обучение, одна в валидацию"""
        rows = manifest({"Kalyani": 2})

        train, val = split_dataset(rows, TrainConfig(split_fraction=0.95))

        assert len(train) == 1
        assert len(val) == 1

    def test_single_recording_raises(self):
        rows = manifest({"Kalyani": 4, "Todi": 1}, clips_per_recording=3)

        with pytest.raises(SplitError) as exc_info:
            split_dataset(rows, TrainConfig())

        assert exc_info.value.details == {"raga": "Todi", "recordings": 1}
        assert exc_info.value.exit_code == 3

    def test_clip_level_splits_a_single_recording(self):
        rows = manifest({"Kalyani": 1}, clips_per_recording=10)

        train, val = split_dataset(rows, TrainConfig(split_mode="clip"))

        assert len(train) == 8
        assert len(val) == 2

    def test_clip_level_single_clip_goes_to_training(self):
        rows = manifest({"Kalyani": 5, "Todi": 1})

        train, val = split_dataset(rows, TrainConfig(split_mode="clip"))

        assert [row.raga for row in train].count("Todi") == 1
        assert all(row.raga == "Kalyani" for row in val)


@pytest.mark.unit
class TestLoadSplit:
    """Тесты для load_split"""

    def test_labels_cover_all_rows(self, workdir, feature_rows):
        train, val = load_split(feature_rows, TrainConfig(), FeatureRepository(workdir))

        assert train.labels.names == ["Kalyani", "Mohanam", "Todi"]
        assert val.labels == train.labels
        assert len(train) == 24
        assert len(val) == 6
        assert train.x.shape[1:] == (10, 7)

    def test_empty_manifest(self, workdir):
        with pytest.raises(EmptyDatasetError):
            load_split([], TrainConfig(), FeatureRepository(workdir))

    def test_empty_validation_side(self, workdir):
        rows = write_feature_rows(workdir, {"Kalyani": 1})

        with pytest.raises(TrainConfigError):
            load_split(rows, TrainConfig(split_mode="clip"), FeatureRepository(workdir))


@pytest.mark.unit
class TestEarlyStopping:
    """Тесты для EarlyStopping"""

    @staticmethod
    def run(losses, patience, min_delta=1e-6):
        stopper = EarlyStopping(patience, min_delta)
        for epoch, loss in enumerate(losses, start=1):
            if stopper.update(epoch, loss):
                break
        return stopper

    def test_stops_exactly_patience_after_best(self):
        stopper = self.run([1.0, 0.8, 0.85, 0.9, 0.95, 0.7], patience=3)

        assert stopper.best_epoch == 2
        assert stopper.stopped_epoch == 5

    def test_flat_line_after_epoch_thirty(self):
        """Улучшения до 30-й эпохи, дальше плато: остановка на 130-й"""
        losses = [1.0 / epoch for epoch in range(1, 31)] + [1.0 / 30] * 300

        stopper = self.run(losses, patience=100)

        assert stopper.best_epoch == 30
        assert stopper.stopped_epoch == 130

    def test_improvement_below_threshold_is_ignored(self):
        stopper = self.run([1.0, 1.0 - 5e-7, 1.0 - 9e-7], patience=2)

        assert stopper.best_epoch == 1
        assert stopper.stopped_epoch == 3

    def test_never_stops_while_improving(self):
        stopper = self.run([1.0 - 0.01 * epoch for epoch in range(50)], patience=5)

        assert stopper.stopped_epoch is None
        assert stopper.best_epoch == 50

    def test_restore_best_state(self, tiny_model_config):
        network = Network(tiny_model_config)
        stopper = EarlyStopping(patience=5)
        stopper.update(1, 0.5, network)
        best = network.get_state()
        network.parameters()["0.W"][...] = 0.0
        stopper.update(2, 0.9, network)

        stopper.restore(network)

        assert np.array_equal(network.parameters()["0.W"], best["0.W"])


class UniformNetwork:
    """Сеть с равномерным выходом"""

    def __init__(self, num_classes: int):
        self.config = SimpleNamespace(num_classes=num_classes)

    def predict(self, x):
        return np.full((x.shape[0], self.config.num_classes), 1.0 / self.config.num_classes)


@pytest.mark.unit
class TestEvaluate:
    """Тесты для evaluate"""

    def test_uniform_outputs_on_balanced_classes(self):
        labels = LabelMap.from_names(f"raga{k:03d}" for k in range(172))
        dataset = FeatureDataset(
            x=np.zeros((344, 2, 2)),
            y=np.repeat(np.arange(172), 2),
            labels=labels,
            recording_ids=[""] * 344,
            clip_ids=[""] * 344,
        )

        result = evaluate(UniformNetwork(172), dataset, batch_size=100)

        assert result.accuracy == pytest.approx(1 / 172)
        assert result.loss == pytest.approx(math.log(172), rel=1e-9)
        assert result.confusion.sum() == 344
        assert np.all(result.confusion[:, 0] == 2)

    def test_empty_dataset(self):
        dataset = FeatureDataset(
            x=np.zeros((0, 2, 2)),
            y=np.zeros(0, dtype=np.int64),
            labels=LabelMap.from_names(["Todi"]),
            recording_ids=[],
            clip_ids=[],
        )

        with pytest.raises(EmptyDatasetError):
            evaluate(UniformNetwork(1), dataset)

    def test_normalized_confusion(self):
        result = EvaluationResult(loss=0.0, accuracy=0.5, confusion=np.array([[3, 1], [0, 0]]))

        normalized = result.normalized()

        np.testing.assert_allclose(normalized, [[0.75, 0.25], [0.0, 0.0]])


@pytest.mark.integration
class TestTrainingService:
    """Тесты для TrainingService.train на маленьких датасетах признаков"""

    @pytest.fixture
    def split(self, workdir, feature_rows):
        return load_split(feature_rows, TrainConfig(), FeatureRepository(workdir))

    def model_config(self, dataset, seed=0):
        return build_model_config(
            dense_architecture(), input_frames=10, input_bins=7, num_classes=dataset.num_classes, seed=seed
        )

    def test_history_and_metrics_file(self, workdir, split):
        train, val = split
        metrics = MetricsRepository(workdir)

        result = TrainingService(train_config(epochs=12, patience=12), metrics).train(
            self.model_config(train), train, val
        )

        assert len(result.history) == 12
        assert [record.epoch for record in result.history] == list(range(1, 13))
        assert metrics.load() == result.history
        assert all(record.seconds == 0.0 for record in result.history)

    def test_restores_best_validation_loss(self, split):
        train, val = split

        result = train_model(self.model_config(train), train, val, train_config())

        restored = result.history[result.best_epoch - 1]
        assert restored.val_loss == min(record.val_loss for record in result.history)
        assert result.final.loss == restored.val_loss
        assert result.final.accuracy == restored.val_accuracy

    def test_saved_model_reproduces_final_metrics(self, split):
        train, val = split
        result = train_model(self.model_config(train), train, val, train_config(epochs=15, patience=5))

        checkpoint = load_model(save_model(result.network, train.labels))

        assert evaluate(checkpoint.network, val).loss == result.final.loss

    def test_learns_separable_classes(self, split):
        train, val = split

        result = train_model(self.model_config(train), train, val, train_config())

        assert result.final.accuracy == 1.0
        assert result.final.confusion.trace() == len(val)

    def test_early_stop_respects_patience(self, split):
        train, val = split

        result = train_model(self.model_config(train), train, val, train_config(epochs=200, patience=3))

        epochs_run = len(result.history)
        assert epochs_run <= 200
        if result.stopped_early:
            assert epochs_run == result.best_epoch + 3

    def test_same_seed_same_metrics_file(self, workdir, split):
        train, val = split
        first = MetricsRepository(workdir, "first.csv")
        second = MetricsRepository(workdir, "second.csv")

        TrainingService(train_config(epochs=5, patience=5), first).train(self.model_config(train), train, val)
        TrainingService(train_config(epochs=5, patience=5), second).train(self.model_config(train), train, val)

        assert first.path.read_bytes() == second.path.read_bytes()

    def test_single_class(self, workdir):
        rows = write_feature_rows(workdir, {"Todi": 4})
        train, val = load_split(rows, TrainConfig(), FeatureRepository(workdir))

        result = train_model(self.model_config(train), train, val, train_config(epochs=2, patience=2))

        assert result.history[0].train_accuracy == 1.0
        assert result.history[0].val_accuracy == 1.0
        assert result.final.loss == 0.0

    def test_empty_validation(self, split):
        train, val = split

        with pytest.raises(TrainConfigError):
            train_model(self.model_config(train), train, val.subset([]), train_config())

    def test_non_finite_input_reports_epoch(self, split):
        train, val = split
        x = train.x.copy()
        x[0, 0, 0] = np.inf
        broken = FeatureDataset(x=x, y=train.y, labels=train.labels, recording_ids=train.recording_ids, clip_ids=train.clip_ids)

        with pytest.raises(NonFiniteError) as exc_info:
            train_model(self.model_config(train), broken, val, train_config())

        assert exc_info.value.details["epoch"] == 1
        assert exc_info.value.exit_code == 4


@pytest.mark.unit
class TestLoadDataset:
    """Тесты для load_dataset"""

    def test_tensors_and_ids(self, workdir, feature_rows):
        dataset = load_dataset(feature_rows, FeatureRepository(workdir))

        assert dataset.x.shape == (30, 10, 7)
        assert dataset.x.dtype == np.float64
        assert dataset.y.tolist() == [0] * 10 + [1] * 10 + [2] * 10
        assert dataset.clip_ids[1] == "wav/kalyani/kalyani_000.wav#1"
        assert dataset.recording_ids[2] == "kalyani_001"

    def test_empty_rows(self, workdir):
        with pytest.raises(EmptyDatasetError):
            load_dataset([], FeatureRepository(workdir))

    def test_row_without_features(self, workdir):
        rows = [ManifestRow(path="a.wav", raga="Todi", recording_id="a")]

        with pytest.raises(ManifestError) as exc_info:
            load_dataset(rows, FeatureRepository(workdir))

        assert exc_info.value.details["row"] == 2

    def test_unknown_raga(self, workdir, feature_rows):
        labels = LabelMap.from_names(["Kalyani", "Mohanam"])

        with pytest.raises(ManifestError, match="not in the label map"):
            load_dataset(feature_rows, FeatureRepository(workdir), labels=labels)

    def test_config_hash_mismatch(self, workdir, feature_rows):
        with pytest.raises(ConfigHashMismatchError):
            load_dataset(feature_rows, FeatureRepository(workdir), expected_hash="ffffffffffffffff")

    def test_shape_mismatch(self, workdir):
        rows = write_feature_rows(workdir, {"Kalyani": 1}) + write_feature_rows(workdir, {"Todi": 1}, frames=12)

        with pytest.raises(DimensionError):
            load_dataset(rows, FeatureRepository(workdir))
