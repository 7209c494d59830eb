import csv
import io
from pathlib import Path

from pydantic import ValidationError

from raganet.core.exceptions import ManifestError
from raganet.repositories.base import FileRepository
from raganet.schemas.training import FEATURE_MANIFEST_COLUMNS, MANIFEST_COLUMNS, ManifestRow


class ManifestRepository(FileRepository):
    """
    Репозиторий манифестов датасета (CSV, UTF-8, с заголовком).

    Пути клипов и файлов признаков в манифесте - относительно директории
    самого манифеста.
    """

    kind = "manifest"

    def load(self, relative: str | Path, check_paths: bool = True) -> list[ManifestRow]:
        """
        Прочитать манифест.

        Args:
            relative: Путь к манифесту
            check_paths: Проверять существование клипов

        Returns:
            Строки манифеста в порядке файла

        Raises:
            InputFileNotFoundError: Манифеста нет
            ManifestError: Нет обязательных столбцов, битая строка или нет клипа
        """
        path = self.resolve(relative)
        reader = csv.DictReader(io.StringIO(self.read_text(path)))
        missing = [column for column in MANIFEST_COLUMNS if column not in (reader.fieldnames or [])]
        if missing:
            raise ManifestError(f"missing columns {missing}", path=str(path))

        rows: list[ManifestRow] = []
        for line, record in enumerate(reader, start=2):
            values = {key: value for key, value in record.items() if key in FEATURE_MANIFEST_COLUMNS}
            # пустые необязательные поля
            for optional in ("tonic_hz", "segment", "feature_path"):
                if values.get(optional, "") in ("", None):
                    values.pop(optional, None)
            try:
                row = ManifestRow(**values)
            except ValidationError as exc:
                raise ManifestError(str(exc.errors()[0]["msg"]), row=line, path=str(path)) from exc

            if check_paths and not (path.parent / row.path).is_file():
                raise ManifestError(f"clip '{row.path}' does not exist", row=line, path=str(path))
            rows.append(row)
        return rows

    def save(self, rows: list[ManifestRow], relative: str | Path) -> Path:
        """
        Записать манифест; столбцы признаков добавляются, если они заполнены.

        Returns:
            Путь записанного файла
        """
        featurized = any(row.feature_path is not None for row in rows)
        columns = FEATURE_MANIFEST_COLUMNS if featurized else MANIFEST_COLUMNS

        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            record = row.model_dump()
            writer.writerow(["" if record[column] is None else record[column] for column in columns])
        return self.write_text(relative, buffer.getvalue())
