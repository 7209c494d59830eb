import logging
from pathlib import Path

import numpy as np

from raganet.core.exceptions import EmptyDatasetError
from raganet.repositories.checkpoints import Checkpoint
from raganet.schemas.audio import AudioClip, SegmentationConfig
from raganet.schemas.features import FeatureConfig
from raganet.schemas.training import RankedPrediction
from raganet.services.audio_service import load_clip
from raganet.services.feature_service import FeatureExtractor
from raganet.services.preprocess_service import prepare_clip

logger = logging.getLogger(__name__)


def rank_probabilities(probs: np.ndarray, names: list[str]) -> list[RankedPrediction]:
    """Раги по убыванию вероятности; при равенстве - меньший id первым"""
    order = np.argsort(-probs, kind="stable")
    return [RankedPrediction(raga=names[i], probability=float(probs[i])) for i in order]


class PredictionService:
    """
    Предсказание раги для записи по контрольной точке.

    Запись режется на сегменты так же, как при обучении; вероятности
    сегментов усредняются.
    """

    def __init__(self, checkpoint: Checkpoint):
        self.checkpoint = checkpoint
        self.segmentation = checkpoint.segmentation or SegmentationConfig()
        self.extractor = FeatureExtractor(checkpoint.feature_config or FeatureConfig())

    def segment_probabilities(self, clip: AudioClip) -> np.ndarray:
        """
        Вероятности по сегментам: [сегменты x классы].

        Raises:
            EmptyDatasetError: Клип не дал ни одного сегмента
        """
        segments = prepare_clip(clip, self.segmentation)
        if not segments:
            raise EmptyDatasetError(f"clip '{clip.clip_id}'")
        x = np.stack([self.extractor.extract(segment).values for segment in segments]).astype(np.float64)
        return self.checkpoint.network.predict(x)

    def predict_clip(self, clip: AudioClip) -> list[RankedPrediction]:
        probs = self.segment_probabilities(clip)
        mean = probs.mean(axis=0)
        logger.debug("Clip '%s': %d segment(s) averaged", clip.clip_id, probs.shape[0])
        return rank_probabilities(mean, self.checkpoint.labels.names)

    def predict(self, path: Path) -> list[RankedPrediction]:
        """
        Ранжированный список (рага, вероятность) для WAV-файла.

        Raises:
            InputFileNotFoundError / WavFormatError / ...: ошибки чтения клипа
        """
        return self.predict_clip(load_clip(path))


def predict(checkpoint: Checkpoint, path: Path) -> list[RankedPrediction]:
    return PredictionService(checkpoint).predict(path)
