"""
Подготовка датасета: клипы манифеста -> файлы признаков -> тензоры.
"""

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from tqdm import tqdm

from raganet.core.exceptions import DataError, DimensionError, EmptyDatasetError, ManifestError
from raganet.repositories.features import FeatureRepository
from raganet.repositories.manifests import ManifestRepository
from raganet.schemas.audio import AudioClip, SegmentationConfig
from raganet.schemas.notes import LabelMap
from raganet.schemas.training import ManifestRow
from raganet.services.audio_service import load_clip
from raganet.services.feature_service import FeatureExtractor
from raganet.services.preprocess_service import prepare_clip
from raganet.services.synth_service import slugify

logger = logging.getLogger(__name__)

FEATURE_MANIFEST_NAME = "manifest.csv"


@dataclass
class FeatureDataset:
    """
    Тензоры для обучения.

    x: [N x кадры x бины] float64, y: [N] номера классов; ids - записи
    и сегменты, из которых получены строки.
    """

    x: np.ndarray
    y: np.ndarray
    labels: LabelMap
    recording_ids: list[str]
    clip_ids: list[str]

    def __len__(self) -> int:
        return int(self.y.shape[0])

    @property
    def num_classes(self) -> int:
        return len(self.labels)

    def subset(self, indices) -> "FeatureDataset":
        indices = np.asarray(indices, dtype=np.int64)
        return FeatureDataset(
            x=self.x[indices],
            y=self.y[indices],
            labels=self.labels,
            recording_ids=[self.recording_ids[i] for i in indices],
            clip_ids=[self.clip_ids[i] for i in indices],
        )


def expected_segments(clip: AudioClip, cfg: SegmentationConfig) -> int:
    """Число сегментов, которое даст prepare_clip, без передискретизации"""
    length = clip.num_samples
    if clip.sample_rate != cfg.sample_rate:
        length = int(round(length * cfg.sample_rate / clip.sample_rate))
    trimmed = length - 2 * int(math.floor(length * cfg.trim_fraction))
    return math.ceil(trimmed / cfg.segment_samples)


class FeaturizeService:
    """
    Извлечение признаков для всех клипов манифеста.

    Файлы признаков, новый манифест (по строке на сегмент) и нарезка
    пишутся в out_dir; актуальные файлы не пересчитываются, если нарезка
    не менялась.
    """

    def __init__(
        self,
        extractor: FeatureExtractor,
        segmentation: SegmentationConfig,
        out_dir: Path,
        workers: int = 1,
        progress: bool = False,
    ):
        self.extractor = extractor
        self.segmentation = segmentation
        self.out_dir = Path(out_dir)
        self.workers = max(1, workers)
        self.progress = progress
        self.features = FeatureRepository(self.out_dir)
        self.manifests = ManifestRepository(self.out_dir)
        self._reuse = False

    def _featurize_row(self, item: tuple[ManifestRow, Path]) -> tuple[list[ManifestRow], bool]:
        row, clip_path = item
        slug = slugify(row.raga)
        stem = Path(row.path).stem
        try:
            clip = load_clip(clip_path)
            count = expected_segments(clip, self.segmentation)
            relatives = [FeatureRepository.relative_path(slug, stem, i) for i in range(count)]

            fresh = self._reuse and count > 0 and all(
                self.features.is_up_to_date(rel, clip_path, self.extractor.config_hash) for rel in relatives
            )
            if not fresh:
                segments = prepare_clip(clip, self.segmentation)
                relatives = [FeatureRepository.relative_path(slug, stem, i) for i in range(len(segments))]
                for segment, relative in zip(segments, relatives):
                    self.features.save(self.extractor.extract(segment), relative)
        except DataError as exc:
            exc.details.setdefault("clip", row.path)
            raise

        manifest_path = os.path.relpath(clip_path, self.out_dir)
        rows = [
            ManifestRow(
                path=Path(manifest_path).as_posix(),
                raga=row.raga,
                recording_id=row.recording_id,
                tonic_hz=row.tonic_hz,
                segment=index,
                feature_path=relative,
            )
            for index, relative in enumerate(relatives)
        ]
        return rows, fresh

    def run(self, manifest_path: Path) -> list[ManifestRow]:
        """
        Признаки для манифеста клипов.

        Returns:
            Строки нового манифеста (записан в out_dir/manifest.csv)

        Raises:
            InputFileNotFoundError: Нет манифеста
            ManifestError: Ошибка в манифесте или повтор имени клипа внутри раги
        """
        manifest_path = Path(manifest_path)
        source_rows = ManifestRepository(manifest_path.parent).load(manifest_path.name)
        if not source_rows:
            raise EmptyDatasetError("manifest")

        seen: set[tuple[str, str]] = set()
        for line, row in enumerate(source_rows, start=2):
            key = (slugify(row.raga), Path(row.path).stem)
            if key in seen:
                raise ManifestError(f"clip name '{key[1]}' repeats within raga '{row.raga}'", row=line)
            seen.add(key)

        # файлы другой нарезки не переиспользуются, запись снимается до перезаписи
        self._reuse = self.features.stored_segmentation() == self.segmentation
        if not self._reuse:
            self.features.clear_segmentation()

        jobs = [(row, (manifest_path.parent / row.path).resolve()) for row in source_rows]
        logger.info(
            "Featurizing %d clips (config %s) into %s",
            len(jobs),
            self.extractor.config_hash,
            self.out_dir,
        )
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            results = list(
                tqdm(
                    pool.map(self._featurize_row, jobs),
                    total=len(jobs),
                    desc="featurize",
                    disable=not self.progress,
                )
            )

        rows = [row for segment_rows, _ in results for row in segment_rows]
        skipped = sum(1 for _, fresh in results if fresh)
        if skipped:
            logger.info("Skipped %d up-to-date clip(s)", skipped)
        self.manifests.save(rows, FEATURE_MANIFEST_NAME)
        self.features.save_segmentation(self.segmentation)
        logger.info("Wrote %d feature files and %s", len(rows), self.out_dir / FEATURE_MANIFEST_NAME)
        return rows


def load_dataset(
    rows: list[ManifestRow],
    features: FeatureRepository,
    expected_hash: str | None = None,
    labels: LabelMap | None = None,
) -> FeatureDataset:
    """
    Собрать тензоры из файлов признаков манифеста.

    Args:
        rows: Строки манифеста с feature_path
        features: Репозиторий, относительно которого заданы feature_path
        expected_hash: Требуемый хэш конфигурации признаков
        labels: Карта меток; по умолчанию строится из имён раг

    Raises:
        EmptyDatasetError: Нет строк
        ManifestError: У строки нет feature_path или рага неизвестна
        DimensionError: Разное число кадров или бинов у сегментов
        ConfigHashMismatchError: Признаки посчитаны с другой конфигурацией
    """
    if not rows:
        raise EmptyDatasetError()
    labels = labels or LabelMap.from_names(row.raga for row in rows)

    matrices = []
    targets = []
    for line, row in enumerate(rows, start=2):
        if row.feature_path is None:
            raise ManifestError("row has no feature_path, run featurize first", row=line)
        try:
            targets.append(labels.id_of(row.raga))
        except KeyError:
            raise ManifestError(f"raga '{row.raga}' is not in the label map", row=line) from None
        fm = features.load(row.feature_path, expected_hash=expected_hash)
        if matrices and fm.values.shape != matrices[0].shape:
            raise DimensionError(
                f"feature file '{row.feature_path}' has a different shape",
                expected=matrices[0].shape,
                actual=fm.values.shape,
            )
        matrices.append(fm.values)

    return FeatureDataset(
        x=np.stack(matrices).astype(np.float64),
        y=np.asarray(targets, dtype=np.int64),
        labels=labels,
        recording_ids=[row.recording_id for row in rows],
        clip_ids=[f"{row.path}#{row.segment or 0}" for row in rows],
    )
