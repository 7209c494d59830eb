import logging
import math

import numpy as np

from raganet.core.exceptions import DegenerateClipError, SampleRateMismatchError
from raganet.schemas.audio import AudioClip, SegmentationConfig
from raganet.services.audio_service import resample

logger = logging.getLogger(__name__)

MIN_TRIMMED_SAMPLES = 10


def trim(clip: AudioClip, cfg: SegmentationConfig) -> AudioClip:
    """
    Отрезание начальной и конечной доли клипа.

    start = floor(len * trim_fraction), end = len - start.

    Args:
        clip: Исходный клип
        cfg: Параметры сегментации

    Returns:
        AudioClip: Средняя часть клипа

    Raises:
        DegenerateClipError: После обрезки осталось меньше 10 отсчётов
    """
    length = clip.num_samples
    start = int(math.floor(length * cfg.trim_fraction))
    end = length - start
    if end - start < MIN_TRIMMED_SAMPLES:
        raise DegenerateClipError(max(end - start, 0), MIN_TRIMMED_SAMPLES)
    if start == 0:
        return clip
    return clip.with_samples(clip.samples[start:end])


def segment(clip: AudioClip, cfg: SegmentationConfig) -> list[AudioClip]:
    """
    Нарезка на сегменты фиксированной длины с дополнением тишиной.

    Последний сегмент дополняется нулями в хвосте; сегмента из одного
    паддинга не бывает.

    Args:
        clip: Клип с частотой cfg.sample_rate
        cfg: Параметры сегментации

    Returns:
        Список сегментов (пустой для пустого клипа)

    Raises:
        SampleRateMismatchError: Частота клипа не совпадает с cfg.sample_rate
    """
    if clip.sample_rate != cfg.sample_rate:
        raise SampleRateMismatchError(clip.sample_rate, cfg.sample_rate)

    length = clip.num_samples
    size = cfg.segment_samples
    count = math.ceil(length / size)

    segments = []
    for index in range(count):
        chunk = clip.samples[index * size:(index + 1) * size]
        if chunk.shape[0] < size:
            chunk = np.concatenate([chunk, np.zeros(size - chunk.shape[0], dtype=np.float32)])
        segments.append(
            AudioClip(
                samples=chunk,
                sample_rate=clip.sample_rate,
                clip_id=f"{clip.clip_id}#{index}" if clip.clip_id else str(index),
            )
        )
    return segments


def prepare_clip(clip: AudioClip, cfg: SegmentationConfig) -> list[AudioClip]:
    """
    Полная подготовка записи: передискретизация, обрезка, нарезка.

    Обрезка выполняется после передискретизации.

    Args:
        clip: Исходный клип с любой частотой
        cfg: Параметры сегментации

    Returns:
        Сегменты одинаковой длины cfg.segment_samples
    """
    clip = resample(clip, cfg.sample_rate)
    trimmed = trim(clip, cfg)
    segments = segment(trimmed, cfg)
    logger.debug(
        "Prepared clip '%s': %d -> %d samples, %d segment(s)",
        clip.clip_id,
        clip.num_samples,
        trimmed.num_samples,
        len(segments),
    )
    return segments
