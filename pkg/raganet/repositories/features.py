from pathlib import Path

from pydantic import ValidationError

from raganet.core.exceptions import ConfigHashMismatchError, FeatureFileError, SegmentationMismatchError
from raganet.repositories.base import FileRepository
from raganet.schemas.audio import SegmentationConfig
from raganet.schemas.features import FeatureMatrix
from raganet.services.feature_service import FEATURE_HEADER, read_features, write_features

FEATURE_SUFFIX = ".rgfb"
SEGMENTATION_NAME = "segmentation.json"


class FeatureRepository(FileRepository):
    """
    Файлы признаков в рабочей директории.

    Файл считается актуальным, если хэш конфигурации в заголовке совпадает
    с ожидаемым и файл не старше исходного клипа. Нарезка, с которой
    посчитаны все файлы каталога, хранится в segmentation.json.
    """

    kind = "feature file"

    @staticmethod
    def relative_path(raga_slug: str, recording_id: str, segment: int) -> str:
        return f"{raga_slug}/{recording_id}_{segment:03d}{FEATURE_SUFFIX}"

    def save(self, fm: FeatureMatrix, relative: str | Path) -> Path:
        return self.write_bytes(relative, write_features(fm))

    def load(self, relative: str | Path, expected_hash: str | None = None) -> FeatureMatrix:
        """
        Прочитать файл признаков.

        Args:
            relative: Путь к файлу
            expected_hash: Хэш конфигурации, с которой должны совпадать признаки

        Raises:
            InputFileNotFoundError: Файла нет
            FeatureFileError: Файл повреждён
            ConfigHashMismatchError: Признаки посчитаны с другой конфигурацией
        """
        path = self.resolve(relative)
        try:
            fm = read_features(self.read_bytes(path), clip_id=path.stem)
        except FeatureFileError as exc:
            exc.details.setdefault("path", str(path))
            raise
        if expected_hash is not None and fm.config_hash != expected_hash:
            raise ConfigHashMismatchError(expected_hash, fm.config_hash, path=str(path))
        return fm

    def stored_hash(self, relative: str | Path) -> str | None:
        """Хэш конфигурации из заголовка, без чтения данных"""
        path = self.resolve(relative)
        if not path.is_file():
            return None
        with path.open("rb") as fh:
            header = fh.read(FEATURE_HEADER.size)
        if len(header) < FEATURE_HEADER.size:
            return None
        return FEATURE_HEADER.unpack(header)[4].hex()

    def is_up_to_date(self, relative: str | Path, source: Path, config_hash: str) -> bool:
        if self.stored_hash(relative) != config_hash:
            return False
        return self.mtime(relative) >= Path(source).stat().st_mtime

    def stored_segmentation(self) -> SegmentationConfig | None:
        """Нарезка последнего завершённого featurize; None, если записи нет или она нечитаема"""
        if not self.exists(SEGMENTATION_NAME):
            return None
        try:
            return SegmentationConfig.model_validate_json(self.read_bytes(SEGMENTATION_NAME))
        except ValidationError:
            return None

    def save_segmentation(self, segmentation: SegmentationConfig) -> Path:
        return self.write_text(SEGMENTATION_NAME, segmentation.model_dump_json(indent=2))

    def clear_segmentation(self) -> None:
        self.resolve(SEGMENTATION_NAME).unlink(missing_ok=True)

    def check_segmentation(self, expected: SegmentationConfig) -> None:
        """
        Проверить, что признаки каталога нарезаны с expected.

        Каталог без записи о нарезке (признаки собраны вручную) не проверяется.

        Raises:
            SegmentationMismatchError: Нарезка отличается
        """
        stored = self.stored_segmentation()
        if stored is not None and stored != expected:
            raise SegmentationMismatchError(
                expected.model_dump(mode="json"),
                stored.model_dump(mode="json"),
                path=str(self.resolve(SEGMENTATION_NAME)),
            )
