import struct
from typing import Callable

import numpy as np
import pytest

from raganet.schemas.audio import AudioClip

SAMPLE_RATE = 22050


def make_sine(
    freq: float,
    seconds: float,
    sample_rate: int = SAMPLE_RATE,
    amplitude: float = 0.5,
    clip_id: str = "",
) -> AudioClip:
    """Синусоида заданной частоты и длительности"""
    t = np.arange(int(round(seconds * sample_rate))) / sample_rate
    return AudioClip(
        samples=amplitude * np.sin(2 * np.pi * freq * t),
        sample_rate=sample_rate,
        clip_id=clip_id,
    )


def wav_bytes(
    payload: bytes,
    channels: int = 1,
    sample_rate: int = SAMPLE_RATE,
    bits: int = 16,
    format_tag: int = 1,
) -> bytes:
    """
    Сборка WAV-файла вручную из готового блока данных.

    Args:
        payload: Содержимое чанка data
        channels: Число каналов
        sample_rate: Частота дискретизации
        bits: Бит на отсчёт
        format_tag: Тег формата (1 - PCM, 3 - float)

    Returns:
        Байты RIFF/WAVE
    """
    block_align = channels * bits // 8
    fmt = struct.pack("<HHIIHH", format_tag, channels, sample_rate, sample_rate * block_align, block_align, bits)
    body = b"WAVE" + b"fmt " + struct.pack("<I", len(fmt)) + fmt + b"data" + struct.pack("<I", len(payload)) + payload
    return b"RIFF" + struct.pack("<I", len(body)) + body


@pytest.fixture
def sine_clip() -> Callable[..., AudioClip]:
    """Фабрика синусоидальных клипов"""
    return make_sine


@pytest.fixture
def silent_clip() -> AudioClip:
    """Одна секунда тишины на частоте пайплайна"""
    return AudioClip(samples=np.zeros(SAMPLE_RATE), sample_rate=SAMPLE_RATE, clip_id="silence")


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)
