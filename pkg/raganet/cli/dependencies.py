"""Фабрики сервисов и репозиториев для команд CLI"""

from pathlib import Path

from raganet.repositories.checkpoints import CheckpointRepository
from raganet.repositories.features import FeatureRepository
from raganet.repositories.manifests import ManifestRepository
from raganet.repositories.metrics import MetricsRepository
from raganet.repositories.scales import ScaleRepository
from raganet.schemas.notes import ScaleSpec
from raganet.schemas.run import RunConfig
from raganet.services.dataset_service import FeaturizeService
from raganet.services.feature_service import FeatureExtractor
from raganet.services.notes_service import melakarta_scale
from raganet.services.synth_service import SynthDatasetService
from raganet.services.training_service import TrainingService

CHECKPOINT_PATH = "checkpoints/model.rgmd"
METRICS_PATH = "metrics.csv"
REPORTS_DIR = "reports"
MANIFEST_NAME = "manifest.csv"


def get_scales(run: RunConfig, workdir: Path) -> list[ScaleSpec]:
    """
    Гаммы из файла dataset.scales_file или мелакарты dataset.melakartas.

    Raises:
        InputFileNotFoundError: Файла гамм нет
    """
    if run.dataset.scales_file:
        return ScaleRepository(workdir).load(run.dataset.scales_file)
    return [melakarta_scale(number) for number in run.dataset.melakartas]


def get_feature_extractor(run: RunConfig) -> FeatureExtractor:
    return FeatureExtractor(run.features)


def get_synth_service(run: RunConfig, workdir: Path, progress: bool = False) -> SynthDatasetService:
    return SynthDatasetService(Path(workdir) / run.dataset.data_dir, workers=run.workers, progress=progress)


def get_featurize_service(run: RunConfig, workdir: Path, progress: bool = False) -> FeaturizeService:
    return FeaturizeService(
        get_feature_extractor(run),
        run.segmentation,
        Path(workdir) / run.dataset.features_dir,
        workers=run.workers,
        progress=progress,
    )


def get_manifest_repository(manifest_path: Path) -> ManifestRepository:
    return ManifestRepository(Path(manifest_path).parent)


def get_feature_repository(manifest_path: Path) -> FeatureRepository:
    """Пути feature_path в манифесте - относительно его директории"""
    return FeatureRepository(Path(manifest_path).parent)


def get_metrics_repository(workdir: Path) -> MetricsRepository:
    return MetricsRepository(Path(workdir), METRICS_PATH)


def get_checkpoint_repository(workdir: Path) -> CheckpointRepository:
    return CheckpointRepository(Path(workdir))


def get_training_service(run: RunConfig, workdir: Path) -> TrainingService:
    return TrainingService(run.training, get_metrics_repository(workdir))
