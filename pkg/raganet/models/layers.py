"""
Слои сети с явным обратным проходом.

Последовательности имеют форму [batch x time x channels], float64.
"""

from typing import Any

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from raganet.core.exceptions import DimensionError
from raganet.models.base import Layer, glorot_uniform
from raganet.schemas.model import (
    BatchNorm1DSpec,
    Conv1DSpec,
    DenseSpec,
    DropoutSpec,
    FlattenSpec,
    LSTMSpec,
    MaxPool1DSpec,
    ReLUSpec,
    SoftmaxSpec,
)


def sigmoid(x: np.ndarray) -> np.ndarray:
    # две ветки, чтобы exp не переполнялся
    out = np.empty_like(x)
    positive = x >= 0
    out[positive] = 1.0 / (1.0 + np.exp(-x[positive]))
    exp_x = np.exp(x[~positive])
    out[~positive] = exp_x / (1.0 + exp_x)
    return out


class Conv1D(Layer):
    """Свёртка по времени: шаг 1, без паддинга, веса [out x in x k]"""

    kind = "conv1d"

    def __init__(self, spec: Conv1DSpec, rng: np.random.Generator):
        super().__init__(spec)
        k, c_in, c_out = spec.kernel_size, spec.in_channels, spec.out_channels
        self.params["W"] = glorot_uniform(rng, (c_out, c_in, k), fan_in=c_in * k, fan_out=c_out * k)
        self.params["b"] = np.zeros(c_out)

    def forward(self, x, training=False, rng=None):
        self._expect_sequence(x, self.spec.in_channels)
        if x.shape[1] < self.spec.kernel_size:
            raise DimensionError(
                "sequence is shorter than the convolution kernel",
                expected=self.spec.kernel_size,
                actual=x.shape[1],
            )
        windows = sliding_window_view(x, self.spec.kernel_size, axis=1)  # [B, T', C, k]
        y = np.einsum("btck,ock->bto", windows, self.params["W"]) + self.params["b"]
        return y, (x.shape, windows)

    def backward(self, cache, dy):
        x_shape, windows = cache
        W = self.params["W"]
        grads = {
            "W": np.einsum("btck,bto->ock", windows, dy),
            "b": dy.sum(axis=(0, 1)),
        }
        dx = np.zeros(x_shape)
        frames = dy.shape[1]
        for j in range(self.spec.kernel_size):
            dx[:, j:j + frames, :] += dy @ W[:, :, j]
        return dx, grads


class MaxPool1D(Layer):
    """Максимум по окнам времени; при равенстве побеждает первый индекс"""

    kind = "maxpool1d"

    def forward(self, x, training=False, rng=None):
        self._expect_sequence(x)
        pool, stride = self.spec.pool_size, self.spec.stride
        if x.shape[1] < pool:
            raise DimensionError("sequence is shorter than the pooling window", expected=pool, actual=x.shape[1])
        windows = sliding_window_view(x, pool, axis=1)[:, ::stride]  # [B, T', C, p]
        argmax = windows.argmax(axis=-1)
        y = np.take_along_axis(windows, argmax[..., None], axis=-1)[..., 0]
        return y, (x.shape, argmax)

    def backward(self, cache, dy):
        x_shape, argmax = cache
        batch, frames, channels = argmax.shape
        b_idx, t_idx, c_idx = np.meshgrid(
            np.arange(batch), np.arange(frames), np.arange(channels), indexing="ij"
        )
        positions = t_idx * self.spec.stride + argmax
        dx = np.zeros(x_shape)
        np.add.at(dx, (b_idx, positions, c_idx), dy)
        return dx, {}


class BatchNorm1D(Layer):
    """
    Нормализация по батчу и времени для каждого канала.

    В режиме обучения используются статистики батча, а скользящие
    средние обновляются как m * running + (1 - m) * batch. Дисперсия
    смещённая (деление на N).
    """

    kind = "batchnorm1d"

    def __init__(self, spec: BatchNorm1DSpec, rng: np.random.Generator | None = None):
        super().__init__(spec)
        self.params["gamma"] = np.ones(spec.channels)
        self.params["beta"] = np.zeros(spec.channels)
        self.buffers["running_mean"] = np.zeros(spec.channels)
        self.buffers["running_var"] = np.ones(spec.channels)

    def forward(self, x, training=False, rng=None):
        self._expect_sequence(x, self.spec.channels)
        if training:
            mean = x.mean(axis=(0, 1))
            var = x.var(axis=(0, 1))
            m = self.spec.momentum
            self.buffers["running_mean"] = m * self.buffers["running_mean"] + (1.0 - m) * mean
            self.buffers["running_var"] = m * self.buffers["running_var"] + (1.0 - m) * var
        else:
            mean = self.buffers["running_mean"]
            var = self.buffers["running_var"]

        inv_std = 1.0 / np.sqrt(var + self.spec.epsilon)
        x_hat = (x - mean) * inv_std
        y = self.params["gamma"] * x_hat + self.params["beta"]
        return y, (x_hat, inv_std)

    def backward(self, cache, dy):
        x_hat, inv_std = cache
        count = dy.shape[0] * dy.shape[1]
        grads = {
            "gamma": (dy * x_hat).sum(axis=(0, 1)),
            "beta": dy.sum(axis=(0, 1)),
        }
        dx_hat = dy * self.params["gamma"]
        dx = (
            inv_std
            / count
            * (
                count * dx_hat
                - dx_hat.sum(axis=(0, 1))
                - x_hat * (dx_hat * x_hat).sum(axis=(0, 1))
            )
        )
        return dx, grads


class ReLU(Layer):
    kind = "relu"

    def forward(self, x, training=False, rng=None):
        mask = x > 0
        return np.where(mask, x, 0.0), mask

    def backward(self, cache, dy):
        return dy * cache, {}


class LSTM(Layer):
    """
    LSTM, возвращающий всю последовательность скрытых состояний.

    Вентили в порядке (i, f, g, o): W [4h x in], U [4h x h], bias [4h].
    Смещение вентиля забывания инициализируется forget_bias.
    Начальные h и c нулевые.
    """

    kind = "lstm"

    def __init__(self, spec: LSTMSpec, rng: np.random.Generator):
        super().__init__(spec)
        h, n_in = spec.hidden_size, spec.input_size
        self.params["W"] = glorot_uniform(rng, (4 * h, n_in), fan_in=n_in, fan_out=4 * h)
        self.params["U"] = glorot_uniform(rng, (4 * h, h), fan_in=h, fan_out=4 * h)
        bias = np.zeros(4 * h)
        bias[h:2 * h] = spec.forget_bias
        self.params["b"] = bias

    def forward(self, x, training=False, rng=None):
        self._expect_sequence(x, self.spec.input_size)
        batch, frames, _ = x.shape
        h = self.spec.hidden_size
        W, U, b = self.params["W"], self.params["U"], self.params["b"]

        x_proj = x @ W.T + b
        gates = np.zeros((batch, frames, 4 * h))
        cells = np.zeros((batch, frames + 1, h))
        hidden = np.zeros((batch, frames + 1, h))
        tanh_cells = np.zeros((batch, frames, h))

        for t in range(frames):
            z = x_proj[:, t] + hidden[:, t] @ U.T
            i = sigmoid(z[:, :h])
            f = sigmoid(z[:, h:2 * h])
            g = np.tanh(z[:, 2 * h:3 * h])
            o = sigmoid(z[:, 3 * h:])
            cells[:, t + 1] = f * cells[:, t] + i * g
            tanh_cells[:, t] = np.tanh(cells[:, t + 1])
            hidden[:, t + 1] = o * tanh_cells[:, t]
            gates[:, t] = np.concatenate([i, f, g, o], axis=1)

        return hidden[:, 1:].copy(), (x, gates, cells, hidden, tanh_cells)

    def backward(self, cache, dy):
        x, gates, cells, hidden, tanh_cells = cache
        batch, frames, _ = x.shape
        h = self.spec.hidden_size
        W, U = self.params["W"], self.params["U"]

        dz = np.zeros_like(gates)
        dh_next = np.zeros((batch, h))
        dc_next = np.zeros((batch, h))

        for t in reversed(range(frames)):
            i = gates[:, t, :h]
            f = gates[:, t, h:2 * h]
            g = gates[:, t, 2 * h:3 * h]
            o = gates[:, t, 3 * h:]

            dh = dy[:, t] + dh_next
            do = dh * tanh_cells[:, t]
            dc = dc_next + dh * o * (1.0 - tanh_cells[:, t] ** 2)
            di = dc * g
            dg = dc * i
            df = dc * cells[:, t]
            dc_next = dc * f

            dz[:, t] = np.concatenate(
                [di * i * (1.0 - i), df * f * (1.0 - f), dg * (1.0 - g ** 2), do * o * (1.0 - o)],
                axis=1,
            )
            dh_next = dz[:, t] @ U

        grads = {
            "W": np.einsum("btg,bti->gi", dz, x),
            "U": np.einsum("btg,bth->gh", dz, hidden[:, :-1]),
            "b": dz.sum(axis=(0, 1)),
        }
        return dz @ W, grads


class Flatten(Layer):
    kind = "flatten"

    def forward(self, x, training=False, rng=None):
        return x.reshape(x.shape[0], -1), x.shape

    def backward(self, cache, dy):
        return dy.reshape(cache), {}


class Dense(Layer):
    """Полносвязный слой: y = x W^T + b, W [out x in]"""

    kind = "dense"

    def __init__(self, spec: DenseSpec, rng: np.random.Generator):
        super().__init__(spec)
        n_in, n_out = spec.in_features, spec.out_features
        self.params["W"] = glorot_uniform(rng, (n_out, n_in), fan_in=n_in, fan_out=n_out)
        self.params["b"] = np.zeros(n_out)

    def forward(self, x, training=False, rng=None):
        if x.ndim != 2 or x.shape[1] != self.spec.in_features:
            raise DimensionError(
                "dense expects a [batch x features] input",
                expected=("batch", self.spec.in_features),
                actual=x.shape,
            )
        return x @ self.params["W"].T + self.params["b"], x

    def backward(self, cache, dy):
        grads = {"W": dy.T @ cache, "b": dy.sum(axis=0)}
        return dy @ self.params["W"], grads


class Dropout(Layer):
    """
    Инвертированный dropout: при обучении выход делится на (1 - rate).

    Маска берётся из переданного генератора; без обучения слой - тождество.
    """

    kind = "dropout"

    def forward(self, x, training=False, rng=None):
        rate = self.spec.rate
        if not training or rate == 0.0:
            return x, None
        if rng is None:
            raise ValueError("Для dropout в режиме обучения нужен генератор случайных чисел")
        mask = (rng.random(x.shape) >= rate) / (1.0 - rate)
        return x * mask, mask

    def backward(self, cache, dy):
        if cache is None:
            return dy, {}
        return dy * cache, {}


class Softmax(Layer):
    """Построчный softmax со сдвигом на максимум"""

    kind = "softmax"

    def forward(self, x, training=False, rng=None):
        shifted = x - x.max(axis=-1, keepdims=True)
        exp = np.exp(shifted)
        probs = exp / exp.sum(axis=-1, keepdims=True)
        return probs, probs

    def backward(self, cache, dy):
        probs = cache
        return probs * (dy - (dy * probs).sum(axis=-1, keepdims=True)), {}


_LAYER_TYPES: dict[type, type[Layer]] = {
    Conv1DSpec: Conv1D,
    MaxPool1DSpec: MaxPool1D,
    BatchNorm1DSpec: BatchNorm1D,
    ReLUSpec: ReLU,
    LSTMSpec: LSTM,
    FlattenSpec: Flatten,
    DenseSpec: Dense,
    DropoutSpec: Dropout,
    SoftmaxSpec: Softmax,
}

_PARAMETRIC = (Conv1D, BatchNorm1D, LSTM, Dense)


def build_layer(spec: Any, rng: np.random.Generator) -> Layer:
    """Слой по спецификации; параметры инициализируются из rng"""
    layer_type = _LAYER_TYPES[type(spec)]
    if layer_type in _PARAMETRIC:
        return layer_type(spec, rng)
    return layer_type(spec)
