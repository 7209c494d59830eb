import logging
from pathlib import Path

LOG_FORMAT = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"


def resolve_level(base: str, verbosity: int) -> int:
    """
    Уровень логирования с учётом флагов -v / -q.

    Args:
        base: Базовый уровень из настроек ("INFO", "DEBUG", ...)
        verbosity: Сдвиг (+1 за каждый -v, -1 за каждый -q)

    Returns:
        Числовой уровень logging
    """
    level = logging.getLevelName(base.upper())
    if not isinstance(level, int):
        level = logging.INFO
    return max(logging.DEBUG, min(logging.CRITICAL, level - 10 * verbosity))


def setup_logging(level: int = logging.INFO, log_file: Path | None = None) -> None:
    """
    Настройка корневого логгера пакета.

    Консольный обработчик всегда, файловый - если указан log_file
    (перезаписывается на каждом запуске).
    Повторный вызов заменяет обработчики, а не дублирует их.

    Args:
        level: Уровень логирования
        log_file: Путь к файлу лога запуска
    """
    root = logging.getLogger("raganet")
    for handler in list(root.handlers):
        root.removeHandler(handler)
        handler.close()

    formatter = logging.Formatter(LOG_FORMAT)

    console = logging.StreamHandler()
    console.setFormatter(formatter)
    root.addHandler(console)

    if log_file is not None:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file, mode="w", encoding="utf-8")
        file_handler.setFormatter(formatter)
        root.addHandler(file_handler)

    root.setLevel(level)
