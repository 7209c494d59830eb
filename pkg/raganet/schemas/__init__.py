"""Pydantic схемы конфигураций и доменных типов"""

from raganet.schemas.audio import AudioClip, SegmentationConfig
from raganet.schemas.notes import LabelMap, NoteIndex, RagaLabel, ScaleSpec
from raganet.schemas.features import (
    FeatureConfig,
    FeatureMatrix,
    FilterBank,
    FilterBankConfig,
    StftConfig,
)
from raganet.schemas.synth import GamakaMode, SynthConfig
from raganet.schemas.model import ArchitectureConfig, ModelConfig, ParameterReport
from raganet.schemas.run import DatasetConfig, RunConfig
from raganet.schemas.training import (
    EpochRecord,
    EvaluationResult,
    ManifestRow,
    RankedPrediction,
    TrainConfig,
)

__all__ = [
    # Audio
    "AudioClip",
    "SegmentationConfig",
    # Notes
    "LabelMap",
    "NoteIndex",
    "RagaLabel",
    "ScaleSpec",
    # Features
    "FeatureConfig",
    "FeatureMatrix",
    "FilterBank",
    "FilterBankConfig",
    "StftConfig",
    # Synth
    "GamakaMode",
    "SynthConfig",
    # Model
    "ArchitectureConfig",
    "ModelConfig",
    "ParameterReport",
    # Run
    "DatasetConfig",
    "RunConfig",
    # Training
    "EpochRecord",
    "EvaluationResult",
    "ManifestRow",
    "RankedPrediction",
    "TrainConfig",
]
