from dataclasses import dataclass, field

import numpy as np

DEFAULT_BETA1 = 0.9
DEFAULT_BETA2 = 0.999
DEFAULT_EPSILON = 1e-8


@dataclass
class AdamState:
    """Моменты Adam по именам параметров и номер шага"""

    step: int = 0
    m: dict[str, np.ndarray] = field(default_factory=dict)
    v: dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def empty(self) -> bool:
        return self.step == 0 and not self.m


def adam_step(
    params: dict[str, np.ndarray],
    grads: dict[str, np.ndarray],
    state: AdamState,
    lr: float,
    beta1: float = DEFAULT_BETA1,
    beta2: float = DEFAULT_BETA2,
    epsilon: float = DEFAULT_EPSILON,
) -> AdamState:
    """
    Один шаг Adam с поправкой смещения, параметры обновляются на месте.

    p -= lr * m_hat / (sqrt(v_hat) + eps), где
    m_hat = m / (1 - beta1^t), v_hat = v / (1 - beta2^t).

    Args:
        params: Параметры по именам
        grads: Градиенты с теми же ключами
        state: Состояние оптимизатора (меняется на месте)
        lr: Шаг обучения

    Returns:
        То же состояние после шага
    """
    state.step += 1
    t = state.step
    bias1 = 1.0 - beta1 ** t
    bias2 = 1.0 - beta2 ** t

    for name, param in params.items():
        grad = grads[name]
        if name not in state.m:
            state.m[name] = np.zeros_like(param)
            state.v[name] = np.zeros_like(param)
        m = state.m[name]
        v = state.v[name]
        m *= beta1
        m += (1.0 - beta1) * grad
        v *= beta2
        v += (1.0 - beta2) * (grad * grad)
        param -= lr * (m / bias1) / (np.sqrt(v / bias2) + epsilon)
    return state


class Adam:
    """Оптимизатор Adam поверх adam_step"""

    def __init__(
        self,
        lr: float = 0.001,
        beta1: float = DEFAULT_BETA1,
        beta2: float = DEFAULT_BETA2,
        epsilon: float = DEFAULT_EPSILON,
        state: AdamState | None = None,
    ):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self.state = state or AdamState()

    def step(self, params: dict[str, np.ndarray], grads: dict[str, np.ndarray]) -> None:
        adam_step(params, grads, self.state, self.lr, self.beta1, self.beta2, self.epsilon)

    @property
    def hyperparameters(self) -> dict[str, float]:
        return {"lr": self.lr, "beta1": self.beta1, "beta2": self.beta2, "epsilon": self.epsilon}
