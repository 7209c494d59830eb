"""
Разбиение датасета, цикл обучения с ранней остановкой и оценка.
"""

import logging
import math
import time
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from raganet.core.exceptions import EmptyDatasetError, NonFiniteError, SplitError, TrainConfigError
from raganet.models.losses import cross_entropy, one_hot
from raganet.models.network import Network
from raganet.models.optim import Adam
from raganet.repositories.checkpoints import to_checkpoint_precision
from raganet.repositories.features import FeatureRepository
from raganet.repositories.metrics import MetricsRepository
from raganet.schemas.model import ModelConfig
from raganet.schemas.notes import LabelMap
from raganet.schemas.training import EpochRecord, EvaluationResult, ManifestRow, TrainConfig
from raganet.services.dataset_service import FeatureDataset, load_dataset

logger = logging.getLogger(__name__)

EVAL_BATCH_SIZE = 256


def _train_count(total: int, fraction: float) -> int:
    return min(max(int(round(total * fraction)), 1), total - 1)


def split_dataset(rows: list[ManifestRow], cfg: TrainConfig) -> tuple[list[ManifestRow], list[ManifestRow]]:
    """
    Разбиение манифеста на обучающую и валидационную части.

    Внутри каждой раги (раги по алфавиту) перемешиваются записи (или
    клипы при split_mode="clip") одним генератором с cfg.seed; в обучение
    идёт round(n * split_fraction), но не меньше 1 и не больше n - 1.
    Порядок строк внутри частей - как в манифесте.

    Raises:
        SplitError: У раги одна запись при split_mode="recording"
    """
    rng = np.random.default_rng(cfg.seed)
    by_raga: dict[str, list[str]] = defaultdict(list)
    keys = []
    for index, row in enumerate(rows):
        key = row.recording_id if cfg.split_mode == "recording" else f"{index}"
        keys.append(key)
        if key not in by_raga[row.raga]:
            by_raga[row.raga].append(key)

    train_keys: set[tuple[str, str]] = set()
    for raga in sorted(by_raga):
        units = sorted(by_raga[raga])
        if len(units) < 2:
            if cfg.split_mode == "recording":
                raise SplitError(raga, len(units))
            train_keys.update((raga, unit) for unit in units)
            continue
        order = rng.permutation(len(units))
        chosen = order[:_train_count(len(units), cfg.split_fraction)]
        train_keys.update((raga, units[i]) for i in chosen)

    train = [row for row, key in zip(rows, keys) if (row.raga, key) in train_keys]
    val = [row for row, key in zip(rows, keys) if (row.raga, key) not in train_keys]
    logger.info(
        "Split %d rows (%s level): %d train, %d validation",
        len(rows),
        cfg.split_mode,
        len(train),
        len(val),
    )
    return train, val


def load_split(
    rows: list[ManifestRow],
    cfg: TrainConfig,
    features: FeatureRepository,
    expected_hash: str | None = None,
    labels: LabelMap | None = None,
) -> tuple[FeatureDataset, FeatureDataset]:
    """
    Разбить манифест признаков и собрать тензоры обеих частей.

    Метки строятся по всему манифесту, чтобы id классов не зависели
    от разбиения.

    Raises:
        TrainConfigError: Одна из частей пуста
        SplitError / ManifestError / ConfigHashMismatchError: см. split_dataset, load_dataset
    """
    if not rows:
        raise EmptyDatasetError("manifest")
    labels = labels or LabelMap.from_names(row.raga for row in rows)
    train_rows, val_rows = split_dataset(rows, cfg)
    if not train_rows or not val_rows:
        raise TrainConfigError(
            f"split produced {len(train_rows)} training and {len(val_rows)} validation rows"
        )
    return (
        load_dataset(train_rows, features, expected_hash, labels),
        load_dataset(val_rows, features, expected_hash, labels),
    )


class EarlyStopping:
    """
    Ранняя остановка по валидационной потере.

    Улучшение - только строгое, на величину больше min_delta (по умолчанию 0,
    тогда восстанавливается эпоха с минимальной потерей). Остановка ровно
    через patience эпох после лучшей; лучшее состояние сети сохраняется
    для восстановления.
    """

    def __init__(self, patience: int, min_delta: float = 0.0):
        self.patience = patience
        self.min_delta = min_delta
        self.best_loss = math.inf
        self.best_epoch = 0
        self.best_state: dict[str, np.ndarray] | None = None
        self.stopped_epoch: int | None = None

    def update(self, epoch: int, val_loss: float, network: Network | None = None) -> bool:
        """
        Учесть эпоху.

        Returns:
            True, если обучение пора остановить
        """
        if val_loss < self.best_loss - self.min_delta:
            self.best_loss = val_loss
            self.best_epoch = epoch
            if network is not None:
                self.best_state = network.get_state()
        if epoch - self.best_epoch >= self.patience:
            self.stopped_epoch = epoch
            return True
        return False

    def restore(self, network: Network) -> None:
        if self.best_state is not None:
            network.set_state(self.best_state)


@dataclass
class TrainResult:
    network: Network
    optimizer: Adam
    history: list[EpochRecord] = field(default_factory=list)
    best_epoch: int = 0
    stopped_early: bool = False
    final: EvaluationResult | None = None

    @property
    def best_record(self) -> EpochRecord:
        return min(self.history, key=lambda record: record.val_loss)


def evaluate(network: Network, dataset: FeatureDataset, batch_size: int = EVAL_BATCH_SIZE) -> EvaluationResult:
    """
    Потеря, точность и матрица ошибок в режиме вывода.

    Raises:
        EmptyDatasetError: Пустой датасет
    """
    if len(dataset) == 0:
        raise EmptyDatasetError("evaluation dataset")
    classes = network.config.num_classes
    confusion = np.zeros((classes, classes), dtype=np.int64)
    loss_sum = 0.0
    for start in range(0, len(dataset), batch_size):
        x = dataset.x[start:start + batch_size]
        y = dataset.y[start:start + batch_size]
        probs = network.predict(x)
        loss, _ = cross_entropy(probs, one_hot(y, classes))
        loss_sum += loss * y.shape[0]
        np.add.at(confusion, (y, probs.argmax(axis=1)), 1)
    return EvaluationResult(
        loss=loss_sum / len(dataset),
        accuracy=float(np.trace(confusion)) / len(dataset),
        confusion=confusion,
    )


class TrainingService:
    """
    Цикл обучения: Adam, перемешивание батчей генератором с cfg.seed,
    оценка на валидации после каждой эпохи, ранняя остановка.
    """

    def __init__(self, cfg: TrainConfig, metrics: MetricsRepository | None = None):
        self.cfg = cfg
        self.metrics = metrics

    def _run_epoch(
        self,
        network: Network,
        optimizer: Adam,
        train: FeatureDataset,
        rng: np.random.Generator,
    ) -> tuple[float, float]:
        classes = network.config.num_classes
        order = rng.permutation(len(train))
        loss_sum = 0.0
        correct = 0
        for start in range(0, len(train), self.cfg.batch_size):
            batch = order[start:start + self.cfg.batch_size]
            x, y = train.x[batch], train.y[batch]
            probs, cache = network.forward(x, training=True)
            loss, grad = cross_entropy(probs, one_hot(y, classes))
            grads = network.backward(cache, grad)
            optimizer.step(network.parameters(), grads)
            loss_sum += loss * batch.shape[0]
            correct += int(np.count_nonzero(probs.argmax(axis=1) == y))
        return loss_sum / len(train), correct / len(train)

    def train(self, model_config: ModelConfig, train: FeatureDataset, val: FeatureDataset) -> TrainResult:
        """
        Обучить модель.

        Валидация каждой эпохи считается на весах, округлённых до точности
        контрольной точки. По выходу восстанавливаются округлённые веса эпохи
        с наименьшей валидационной потерей; result.final - метрики именно
        этой модели, result.final.loss равна минимуму val_loss по эпохам.

        Raises:
            TrainConfigError: Пустая обучающая или валидационная часть
            NonFiniteError: NaN/Inf в сети (с номером эпохи)
        """
        if len(train) == 0 or len(val) == 0:
            raise TrainConfigError(
                f"split produced {len(train)} training and {len(val)} validation samples"
            )
        network = Network(model_config)
        optimizer = Adam(lr=self.cfg.learning_rate)
        stopper = EarlyStopping(self.cfg.patience, self.cfg.min_delta)
        rng = np.random.default_rng(self.cfg.seed)
        result = TrainResult(network=network, optimizer=optimizer)

        if self.metrics is not None:
            self.metrics.reset()

        for epoch in range(1, self.cfg.epochs + 1):
            started = time.perf_counter()
            try:
                train_loss, train_accuracy = self._run_epoch(network, optimizer, train, rng)
                # валидация на весах с точностью контрольной точки
                trained_state = network.get_state()
                to_checkpoint_precision(network)
                scores = evaluate(network, val)
            except NonFiniteError as exc:
                raise NonFiniteError(exc.details["layer"], epoch=epoch) from exc
            if not math.isfinite(scores.loss):
                raise NonFiniteError("validation loss", epoch=epoch)

            record = EpochRecord(
                epoch=epoch,
                train_loss=train_loss,
                train_accuracy=train_accuracy,
                val_loss=scores.loss,
                val_accuracy=scores.accuracy,
                seconds=time.perf_counter() - started if self.cfg.record_timing else 0.0,
            )
            result.history.append(record)
            if self.metrics is not None:
                self.metrics.append(record)
            logger.info(
                "epoch %d/%d: loss %.4f acc %.4f | val_loss %.4f val_acc %.4f",
                epoch,
                self.cfg.epochs,
                train_loss,
                train_accuracy,
                scores.loss,
                scores.accuracy,
            )

            stop = stopper.update(epoch, scores.loss, network)
            network.set_state(trained_state)
            if stop:
                result.stopped_early = True
                logger.info(
                    "Early stop at epoch %d: no improvement since epoch %d (val_loss %.6f)",
                    epoch,
                    stopper.best_epoch,
                    stopper.best_loss,
                )
                break

        stopper.restore(network)
        result.best_epoch = stopper.best_epoch
        result.final = evaluate(network, val)
        logger.info(
            "Restored epoch %d weights: val_loss %.6f val_acc %.4f",
            result.best_epoch,
            result.final.loss,
            result.final.accuracy,
        )
        return result


def train_model(
    model_config: ModelConfig,
    train: FeatureDataset,
    val: FeatureDataset,
    cfg: TrainConfig,
    metrics: MetricsRepository | None = None,
) -> TrainResult:
    """Функциональная обёртка над TrainingService.train"""
    return TrainingService(cfg, metrics).train(model_config, train, val)
