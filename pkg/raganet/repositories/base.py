import os
from pathlib import Path

from raganet.core.exceptions import InputFileNotFoundError


class FileRepository:
    """
    Базовый файловый репозиторий.

    Все пути - относительно корня репозитория (обычно рабочей директории).
    Запись атомарна: сначала во временный файл рядом, затем os.replace.
    """

    kind = "file"

    def __init__(self, root: Path):
        self.root = Path(root)

    def resolve(self, relative: str | Path) -> Path:
        """
        Абсолютный путь для относительного.

        Args:
            relative: Путь относительно корня (абсолютные возвращаются как есть)

        Returns:
            Путь на диске
        """
        path = Path(relative)
        return path if path.is_absolute() else self.root / path

    def exists(self, relative: str | Path) -> bool:
        return self.resolve(relative).is_file()

    def mtime(self, relative: str | Path) -> float:
        return self.resolve(relative).stat().st_mtime

    def read_bytes(self, relative: str | Path) -> bytes:
        """
        Прочитать файл целиком.

        Raises:
            InputFileNotFoundError: Файла нет
        """
        path = self.resolve(relative)
        if not path.is_file():
            raise InputFileNotFoundError(str(path), kind=self.kind)
        return path.read_bytes()

    def read_text(self, relative: str | Path) -> str:
        return self.read_bytes(relative).decode("utf-8")

    def write_bytes(self, relative: str | Path, data: bytes) -> Path:
        """
        Записать файл, создав родительские директории.

        Returns:
            Путь записанного файла
        """
        path = self.resolve(relative)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_bytes(data)
        os.replace(tmp, path)
        return path

    def write_text(self, relative: str | Path, text: str) -> Path:
        return self.write_bytes(relative, text.encode("utf-8"))
