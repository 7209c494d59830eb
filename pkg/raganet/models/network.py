import logging
from dataclasses import dataclass
from typing import Any

import numpy as np

from raganet.core.exceptions import DimensionError, ModelStateError, NonFiniteError
from raganet.models.base import Layer
from raganet.models.layers import Softmax, build_layer
from raganet.schemas.model import (
    ArchitectureConfig,
    BatchNorm1DSpec,
    Conv1DSpec,
    DenseSpec,
    DropoutSpec,
    FlattenSpec,
    LayerParameters,
    LSTMSpec,
    MaxPool1DSpec,
    ModelConfig,
    ParameterReport,
    ReLUSpec,
    SoftmaxSpec,
)

logger = logging.getLogger(__name__)

# отдельный поток случайных чисел для масок dropout
DROPOUT_STREAM = 1


@dataclass
class NetworkCache:
    training: bool
    layer_caches: list[Any]


def check_finite(values: np.ndarray, layer: str, epoch: int | None = None) -> None:
    """
    Raises:
        NonFiniteError: В массиве есть NaN или Inf
    """
    if not np.all(np.isfinite(values)):
        raise NonFiniteError(layer, epoch=epoch)


def build_model_config(
    arch: ArchitectureConfig,
    input_frames: int,
    input_bins: int,
    num_classes: int,
    seed: int = 0,
) -> ModelConfig:
    """
    Последовательная архитектура классификатора:
    Conv1D -> MaxPool1D -> BatchNorm1D -> ReLU -> LSTM -> Flatten ->
    [Dense -> ReLU -> Dropout]* -> Dense(num_classes) -> Softmax.

    Raises:
        ValidationError: Формы слоёв несовместимы (например, вход короче ядра)
    """
    layers: list[Any] = [
        Conv1DSpec(in_channels=input_bins, out_channels=arch.conv_filters, kernel_size=arch.kernel_size),
        MaxPool1DSpec(pool_size=arch.pool_size, stride=arch.pool_size),
        BatchNorm1DSpec(channels=arch.conv_filters),
        ReLUSpec(),
        LSTMSpec(input_size=arch.conv_filters, hidden_size=arch.lstm_units),
        FlattenSpec(),
    ]
    conv_frames = input_frames - arch.kernel_size + 1
    pooled_frames = max((conv_frames - arch.pool_size) // arch.pool_size + 1, 0)
    width = pooled_frames * arch.lstm_units
    for units in arch.dense_units:
        layers.extend([DenseSpec(in_features=width, out_features=units), ReLUSpec(), DropoutSpec(rate=arch.dropout)])
        width = units
    layers.extend([DenseSpec(in_features=width, out_features=num_classes), SoftmaxSpec()])
    return ModelConfig(
        layers=layers,
        num_classes=num_classes,
        input_frames=input_frames,
        input_bins=input_bins,
        seed=seed,
    )


class Network:
    """
    Последовательная сеть над слоями из ModelConfig.

    Параметры инициализируются генератором с seed из конфигурации;
    маски dropout берутся из отдельного генератора той же конфигурации,
    поэтому при фиксированном seed совпадают и веса, и маски.
    """

    def __init__(self, config: ModelConfig):
        self.config = config
        init_rng = np.random.default_rng(config.seed)
        self.layers: list[Layer] = [build_layer(spec, init_rng) for spec in config.layers]
        self.dropout_rng = np.random.default_rng([config.seed, DROPOUT_STREAM])

    def _layer_name(self, index: int) -> str:
        return f"{index}:{self.layers[index].kind}"

    def forward(self, x: np.ndarray, training: bool = False) -> tuple[np.ndarray, NetworkCache]:
        """
        Прямой проход.

        Args:
            x: Вход [batch x frames x bins]
            training: Режим обучения (dropout, статистики батча в BatchNorm)

        Returns:
            (вероятности [batch x num_classes], кэш для backward)

        Raises:
            DimensionError: Форма входа не совпадает с конфигурацией
            NonFiniteError: NaN/Inf на выходе слоя (в ошибке - имя слоя)
        """
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 3 or x.shape[1:] != self.config.input_shape:
            raise DimensionError(
                "input does not match the model input shape",
                expected=("batch",) + self.config.input_shape,
                actual=x.shape,
            )
        caches = []
        out = x
        for index, layer in enumerate(self.layers):
            out, cache = layer.forward(out, training=training, rng=self.dropout_rng)
            check_finite(out, self._layer_name(index))
            caches.append(cache)
        return out, NetworkCache(training=training, layer_caches=caches)

    def predict(self, x: np.ndarray) -> np.ndarray:
        """Вероятности в режиме вывода"""
        probs, _ = self.forward(x, training=False)
        return probs

    def backward(self, cache: NetworkCache | None, grad: np.ndarray) -> dict[str, np.ndarray]:
        """
        Обратный проход.

        Если последний слой - Softmax, grad - градиент по его входу (логитам),
        как его возвращает cross_entropy; иначе - по выходу сети.

        Returns:
            Градиенты по ключам parameters()

        Raises:
            ModelStateError: Нет кэша или прямой проход был без обучения
        """
        if cache is None:
            raise ModelStateError("backward called without a forward cache")
        if not cache.training:
            raise ModelStateError("backward needs a forward pass with training=True")

        layers = list(enumerate(self.layers))
        if isinstance(self.layers[-1], Softmax):
            layers = layers[:-1]

        grads: dict[str, np.ndarray] = {}
        dy = grad
        for index, layer in reversed(layers):
            dy, layer_grads = layer.backward(cache.layer_caches[index], dy)
            check_finite(dy, self._layer_name(index))
            for name, value in layer_grads.items():
                grads[f"{index}.{name}"] = value
        return grads

    def parameters(self) -> dict[str, np.ndarray]:
        """Обучаемые параметры по ключам "<индекс слоя>.<имя>" (сами массивы, не копии)"""
        return {
            f"{index}.{name}": value
            for index, layer in enumerate(self.layers)
            for name, value in layer.params.items()
        }

    def buffers(self) -> dict[str, np.ndarray]:
        return {
            f"{index}.{name}": value
            for index, layer in enumerate(self.layers)
            for name, value in layer.buffers.items()
        }

    def get_state(self) -> dict[str, np.ndarray]:
        """Копии всех параметров и буферов"""
        state = {key: value.copy() for key, value in self.parameters().items()}
        state.update({key: value.copy() for key, value in self.buffers().items()})
        return state

    def set_state(self, state: dict[str, np.ndarray]) -> None:
        """
        Восстановить параметры и буферы (копированием в существующие массивы).

        Raises:
            DimensionError: Нет ключа или форма не совпадает
        """
        for index, layer in enumerate(self.layers):
            for store in (layer.params, layer.buffers):
                for name, current in store.items():
                    key = f"{index}.{name}"
                    if key not in state:
                        raise DimensionError(f"state has no entry '{key}'")
                    value = np.asarray(state[key], dtype=np.float64)
                    if value.shape != current.shape:
                        raise DimensionError(
                            f"state entry '{key}' has the wrong shape",
                            expected=current.shape,
                            actual=value.shape,
                        )
                    current[...] = value

    def count_parameters(self) -> ParameterReport:
        """Таблица параметров по слоям (по фактическим массивам)"""
        shapes = self.config.layer_shapes()
        rows = [
            LayerParameters(
                index=index,
                layer=layer.kind,
                output_shape=shapes[index],
                trainable=layer.num_trainable,
                non_trainable=layer.num_non_trainable,
            )
            for index, layer in enumerate(self.layers)
        ]
        return ParameterReport(rows=tuple(rows))


def _spec_parameters(spec: Any) -> tuple[int, int]:
    if isinstance(spec, Conv1DSpec):
        return (spec.kernel_size * spec.in_channels + 1) * spec.out_channels, 0
    if isinstance(spec, DenseSpec):
        return (spec.in_features + 1) * spec.out_features, 0
    if isinstance(spec, LSTMSpec):
        h = spec.hidden_size
        return 4 * (h * (spec.input_size + h) + h), 0
    if isinstance(spec, BatchNorm1DSpec):
        return 2 * spec.channels, 2 * spec.channels
    return 0, 0


def count_parameters(config: ModelConfig) -> ParameterReport:
    """
    Таблица параметров по конфигурации, без выделения памяти под веса.

    Conv1D: (k * in + 1) * out; Dense: (in + 1) * out;
    LSTM: 4 * (h * (in + h) + h); BatchNorm: 2c обучаемых и 2c буферов.
    """
    shapes = config.layer_shapes()
    rows = []
    for index, spec in enumerate(config.layers):
        trainable, non_trainable = _spec_parameters(spec)
        rows.append(
            LayerParameters(
                index=index,
                layer=spec.type,
                output_shape=shapes[index],
                trainable=trainable,
                non_trainable=non_trainable,
            )
        )
    return ParameterReport(rows=tuple(rows))
