import math


def validate_power_of_two(value: int) -> int:
    """
    Валидация что число - степень двойки.

    Args:
        value: Значение для проверки

    Returns:
        int: Валидное значение

    Raises:
        ValueError: Если значение не степень двойки
    """
    if value <= 0 or value & (value - 1):
        raise ValueError("Значение должно быть положительной степенью двойки")
    return value


def validate_positive(value: float) -> float:
    """
    Валидация что значение > 0 и конечно.

    Args:
        value: Значение для проверки

    Returns:
        Валидное значение

    Raises:
        ValueError: Если значение <= 0 или не конечно
    """
    if not math.isfinite(value) or value <= 0:
        raise ValueError("Значение должно быть конечным и больше нуля")
    return value


def validate_unit_fraction(value: float, upper: float = 1.0) -> float:
    """
    Валидация доли в полуинтервале [0, upper).

    Args:
        value: Значение для проверки
        upper: Верхняя граница (не включается)

    Returns:
        float: Валидное значение

    Raises:
        ValueError: Если значение вне [0, upper)
    """
    if not 0.0 <= value < upper:
        raise ValueError(f"Значение должно лежать в [0, {upper})")
    return value


def validate_open_fraction(value: float) -> float:
    """
    Валидация доли в открытом интервале (0, 1).

    Args:
        value: Значение для проверки

    Returns:
        float: Валидное значение

    Raises:
        ValueError: Если значение вне (0, 1)
    """
    if not 0.0 < value < 1.0:
        raise ValueError("Значение должно лежать строго между 0 и 1")
    return value


def validate_non_empty(value: str) -> str:
    """
    Валидация непустой строки (после strip).

    Args:
        value: Строка для проверки

    Returns:
        str: Строка без пробелов по краям

    Raises:
        ValueError: Если строка пустая
    """
    value = value.strip()
    if not value:
        raise ValueError("Строка не может быть пустой")
    return value
