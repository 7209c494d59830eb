import copy
import logging
from pathlib import Path
from typing import Any

import yaml

from raganet.core.exceptions import InputFileNotFoundError, UsageError
from raganet.cli.presets import PRESETS
from raganet.schemas.run import RunConfig

logger = logging.getLogger(__name__)

RUNS_DIR = "runs"


def deep_merge(base: dict[str, Any], override: dict[str, Any]) -> dict[str, Any]:
    """Рекурсивное слияние словарей; значения override побеждают"""
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def load_yaml_config(path: Path) -> dict[str, Any]:
    """
    Чтение YAML-файла конфигурации.

    Raises:
        InputFileNotFoundError: Файла нет
        UsageError: Файл не разбирается или верхний уровень не словарь
    """
    path = Path(path)
    if not path.is_file():
        raise InputFileNotFoundError(str(path), kind="config file")
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise UsageError(f"Cannot parse config file '{path}': {exc}", details={"path": str(path)}) from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise UsageError(f"Config file '{path}' must contain a mapping", details={"path": str(path)})
    return data


def resolve_run_config(
    preset: str,
    config_path: Path | None = None,
    overrides: dict[str, Any] | None = None,
    environment: dict[str, Any] | None = None,
    seed: int | None = None,
    workers: int | None = None,
) -> RunConfig:
    """
    Конфигурация запуска: пресет -> окружение -> YAML -> флаги.

    Верхнеуровневый seed переносится в seed обучения и синтеза.

    Raises:
        UsageError: Неизвестный пресет или плохой файл конфигурации
        ValidationError: Значения не проходят валидацию схем
    """
    if preset not in PRESETS:
        raise UsageError(f"Unknown preset '{preset}'", details={"presets": sorted(PRESETS)})
    merged = deep_merge(PRESETS[preset], environment or {})
    if config_path is not None:
        merged = deep_merge(merged, load_yaml_config(config_path))
    merged = deep_merge(merged, overrides or {})
    merged["preset"] = preset

    if seed is not None:
        merged["seed"] = seed
    if workers is not None:
        merged["workers"] = workers
    run_seed = merged.get("seed", 0)
    for section in ("training", "synth"):
        merged.setdefault(section, {})["seed"] = run_seed

    return RunConfig.model_validate(merged)


def write_run_config(run: RunConfig, workdir: Path, command: str) -> Path:
    """Сохранить итоговую конфигурацию в <workdir>/runs/<command>.json"""
    path = Path(workdir) / RUNS_DIR / f"{command}.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(run.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return path
