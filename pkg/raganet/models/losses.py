import numpy as np

from raganet.core.exceptions import DimensionError

CROSS_ENTROPY_EPSILON = 1e-12


def one_hot(labels: np.ndarray, num_classes: int) -> np.ndarray:
    """Матрица [batch x num_classes] с единицами в позициях меток"""
    labels = np.asarray(labels, dtype=np.int64)
    out = np.zeros((labels.shape[0], num_classes))
    out[np.arange(labels.shape[0]), labels] = 1.0
    return out


def cross_entropy(
    probs: np.ndarray,
    targets: np.ndarray,
    epsilon: float = CROSS_ENTROPY_EPSILON,
) -> tuple[float, np.ndarray]:
    """
    Категориальная кросс-энтропия по выходу softmax.

    loss = -mean_b ln(p[b, y_b] + eps); возвращаемый градиент - по логитам
    перед softmax: (p - y) / batch.

    Args:
        probs: Вероятности [batch x classes]
        targets: One-hot метки той же формы
        epsilon: Сдвиг под логарифмом

    Returns:
        (loss, градиент по логитам)

    Raises:
        DimensionError: Формы не совпадают или батч пуст
    """
    if probs.shape != targets.shape or probs.ndim != 2 or probs.shape[0] == 0:
        raise DimensionError(
            "probabilities and one-hot targets must share a non-empty [batch x classes] shape",
            expected=targets.shape,
            actual=probs.shape,
        )
    batch = probs.shape[0]
    p_true = (probs * targets).sum(axis=1)
    loss = float(-np.mean(np.log(p_true + epsilon)))
    return max(loss, 0.0), (probs - targets) / batch
