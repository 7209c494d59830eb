from raganet.repositories.base import FileRepository
from raganet.repositories.checkpoints import Checkpoint, CheckpointRepository
from raganet.repositories.features import FeatureRepository
from raganet.repositories.manifests import ManifestRepository
from raganet.repositories.metrics import MetricsRepository
from raganet.repositories.scales import ScaleRepository

__all__ = [
    "FileRepository",
    "Checkpoint",
    "CheckpointRepository",
    "FeatureRepository",
    "ManifestRepository",
    "MetricsRepository",
    "ScaleRepository",
]
