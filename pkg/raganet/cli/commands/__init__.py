import json
from pathlib import Path
from typing import Any

from raganet.cli.dependencies import REPORTS_DIR


def put(overrides: dict[str, Any], dotted: str, value: Any) -> None:
    """Записать значение флага по пути "секция.поле"; None пропускается"""
    if value is None:
        return
    *sections, field = dotted.split(".")
    target = overrides
    for section in sections:
        target = target.setdefault(section, {})
    target[field] = value


def write_report(workdir: Path, name: str, report: dict[str, Any]) -> Path:
    """JSON-отчёт в <workdir>/reports/<name>.json"""
    path = Path(workdir) / REPORTS_DIR / f"{name}.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path
