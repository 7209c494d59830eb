from typing import Any

import numpy as np

from raganet.core.exceptions import DimensionError


class Layer:
    """
    Базовый слой сети.

    forward возвращает (выход, кэш), backward принимает этот кэш и
    градиент по выходу и возвращает (градиент по входу, градиенты параметров).
    Обучаемые параметры лежат в params, необучаемые буферы - в buffers.

    Слой не хранит активации между вызовами, поэтому forward без
    обучения безопасен из нескольких потоков.
    """

    kind = "layer"

    def __init__(self, spec: Any):
        self.spec = spec
        self.params: dict[str, np.ndarray] = {}
        self.buffers: dict[str, np.ndarray] = {}

    def forward(
        self,
        x: np.ndarray,
        training: bool = False,
        rng: np.random.Generator | None = None,
    ) -> tuple[np.ndarray, Any]:
        raise NotImplementedError

    def backward(self, cache: Any, dy: np.ndarray) -> tuple[np.ndarray, dict[str, np.ndarray]]:
        raise NotImplementedError

    @property
    def num_trainable(self) -> int:
        return sum(int(p.size) for p in self.params.values())

    @property
    def num_non_trainable(self) -> int:
        return sum(int(b.size) for b in self.buffers.values())

    def _expect_sequence(self, x: np.ndarray, channels: int | None = None) -> None:
        if x.ndim != 3:
            raise DimensionError(
                f"{self.kind} expects a [batch x time x channels] input",
                expected=3,
                actual=x.ndim,
            )
        if channels is not None and x.shape[2] != channels:
            raise DimensionError(
                f"{self.kind} expects {channels} input channels",
                expected=channels,
                actual=x.shape[2],
            )

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.spec!r})"


def glorot_uniform(rng: np.random.Generator, shape: tuple[int, ...], fan_in: int, fan_out: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)
