"""
Формат контрольной точки модели (little-endian):

    "RGMD", версия u32, длина блока конфигурации u32, JSON конфигурации,
    параметры и буферы слоёв float32 в порядке объявления,
    флаг оптимизатора u32; если 1 - шаг u64, lr/beta1/beta2/eps float64
    и моменты m, v каждого параметра float64.
"""

import json
import logging
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from raganet.core.exceptions import CheckpointError
from raganet.models.network import Network
from raganet.models.optim import Adam, AdamState
from raganet.repositories.base import FileRepository
from raganet.schemas.audio import SegmentationConfig
from raganet.schemas.features import FeatureConfig
from raganet.schemas.model import ModelConfig
from raganet.schemas.notes import LabelMap

logger = logging.getLogger(__name__)

CHECKPOINT_MAGIC = b"RGMD"
CHECKPOINT_VERSION = 1
PARAM_DTYPE = np.dtype("<f4")
OPTIM_DTYPE = np.dtype("<f8")

_PREAMBLE = struct.Struct("<4sII")
_FLAG = struct.Struct("<I")
_OPTIM_HEADER = struct.Struct("<Q4d")


@dataclass
class Checkpoint:
    network: Network
    labels: LabelMap
    feature_config: FeatureConfig | None = None
    segmentation: SegmentationConfig | None = None
    optimizer: Adam | None = None


def _state_items(network: Network) -> list[tuple[str, np.ndarray]]:
    items = []
    for index, layer in enumerate(network.layers):
        for store in (layer.params, layer.buffers):
            for name, value in store.items():
                items.append((f"{index}.{name}", value))
    return items


def to_checkpoint_precision(network: Network) -> None:
    """Округлить все параметры и буферы до float32, как при сохранении"""
    network.set_state(
        {key: value.astype(PARAM_DTYPE).astype(np.float64) for key, value in network.get_state().items()}
    )


def save_model(
    network: Network,
    labels: LabelMap,
    feature_config: FeatureConfig | None = None,
    optimizer: Adam | None = None,
    segmentation: SegmentationConfig | None = None,
) -> bytes:
    """
    Сериализация модели, меток, конфигураций признаков и нарезки, состояния Adam.

    Returns:
        Байты контрольной точки
    """
    config_block = {
        "model": network.config.model_dump(mode="json"),
        "labels": labels.names,
        "feature_config": feature_config.model_dump(mode="json") if feature_config else None,
        "feature_hash": feature_config.config_hash() if feature_config else None,
        "segmentation": segmentation.model_dump(mode="json") if segmentation else None,
    }
    config_bytes = json.dumps(config_block, sort_keys=True, separators=(",", ":")).encode("utf-8")

    parts = [_PREAMBLE.pack(CHECKPOINT_MAGIC, CHECKPOINT_VERSION, len(config_bytes)), config_bytes]
    for _, value in _state_items(network):
        parts.append(value.astype(PARAM_DTYPE).tobytes())

    if optimizer is None or optimizer.state.empty:
        parts.append(_FLAG.pack(0))
    else:
        parts.append(_FLAG.pack(1))
        parts.append(
            _OPTIM_HEADER.pack(
                optimizer.state.step, optimizer.lr, optimizer.beta1, optimizer.beta2, optimizer.epsilon
            )
        )
        params = network.parameters()
        for key, value in params.items():
            m = optimizer.state.m.get(key, np.zeros_like(value))
            v = optimizer.state.v.get(key, np.zeros_like(value))
            parts.append(m.astype(OPTIM_DTYPE).tobytes())
            parts.append(v.astype(OPTIM_DTYPE).tobytes())
    return b"".join(parts)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.offset = 0

    def take(self, size: int) -> bytes:
        if self.offset + size > len(self.data):
            raise CheckpointError("file is truncated")
        chunk = self.data[self.offset:self.offset + size]
        self.offset += size
        return chunk

    def array(self, dtype: np.dtype, shape: tuple[int, ...]) -> np.ndarray:
        count = int(np.prod(shape))
        raw = self.take(count * dtype.itemsize)
        return np.frombuffer(raw, dtype=dtype).reshape(shape).astype(np.float64)


def load_model(data: bytes) -> Checkpoint:
    """
    Разбор контрольной точки.

    Raises:
        CheckpointError: Неверная сигнатура или версия, обрезанный файл,
            битая конфигурация или несовпадение хэша признаков
    """
    if len(data) < _PREAMBLE.size:
        raise CheckpointError("file is shorter than the header")
    magic, version, config_len = _PREAMBLE.unpack_from(data, 0)
    if magic != CHECKPOINT_MAGIC:
        raise CheckpointError(f"bad magic {magic!r}")
    if version != CHECKPOINT_VERSION:
        raise CheckpointError(f"unsupported checkpoint version {version}")

    reader = _Reader(data)
    reader.offset = _PREAMBLE.size
    try:
        block = json.loads(reader.take(config_len).decode("utf-8"))
        config = ModelConfig.model_validate(block["model"])
        labels = LabelMap.from_names(block["labels"])
        feature_config = (
            FeatureConfig.model_validate(block["feature_config"]) if block.get("feature_config") else None
        )
        segmentation = (
            SegmentationConfig.model_validate(block["segmentation"]) if block.get("segmentation") else None
        )
    except (ValueError, KeyError, TypeError, ValidationError) as exc:
        raise CheckpointError(f"invalid config block: {exc}") from exc

    if labels.names != list(block["labels"]):
        raise CheckpointError("label names are not sorted and unique")
    if len(labels) != config.num_classes:
        raise CheckpointError(f"{len(labels)} labels for a {config.num_classes}-class model")
    if feature_config is not None and feature_config.config_hash() != block.get("feature_hash"):
        raise CheckpointError("feature config hash does not match the stored feature config")

    network = Network(config)
    state = {key: reader.array(PARAM_DTYPE, value.shape) for key, value in _state_items(network)}
    network.set_state(state)

    (has_optimizer,) = _FLAG.unpack(reader.take(_FLAG.size))
    optimizer = None
    if has_optimizer == 1:
        step, lr, beta1, beta2, epsilon = _OPTIM_HEADER.unpack(reader.take(_OPTIM_HEADER.size))
        adam_state = AdamState(step=step)
        for key, value in network.parameters().items():
            adam_state.m[key] = reader.array(OPTIM_DTYPE, value.shape)
            adam_state.v[key] = reader.array(OPTIM_DTYPE, value.shape)
        optimizer = Adam(lr=lr, beta1=beta1, beta2=beta2, epsilon=epsilon, state=adam_state)
    elif has_optimizer != 0:
        raise CheckpointError(f"bad optimizer flag {has_optimizer}")

    if reader.offset != len(data):
        raise CheckpointError(f"{len(data) - reader.offset} trailing bytes")
    return Checkpoint(
        network=network,
        labels=labels,
        feature_config=feature_config,
        segmentation=segmentation,
        optimizer=optimizer,
    )


class CheckpointRepository(FileRepository):
    """Контрольные точки моделей в рабочей директории"""

    kind = "checkpoint"

    def save(self, checkpoint: Checkpoint, relative: str | Path) -> Path:
        path = self.write_bytes(
            relative,
            save_model(
                checkpoint.network,
                checkpoint.labels,
                checkpoint.feature_config,
                checkpoint.optimizer,
                checkpoint.segmentation,
            ),
        )
        logger.info("Saved checkpoint %s", path)
        return path

    def load(self, relative: str | Path) -> Checkpoint:
        path = self.resolve(relative)
        try:
            return load_model(self.read_bytes(path))
        except CheckpointError as exc:
            exc.details.setdefault("path", str(path))
            raise
