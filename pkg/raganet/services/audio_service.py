"""
Чтение, запись и передискретизация аудио.

Поддерживается только RIFF/WAVE (little-endian) с PCM16 или FLOAT32, 1-2 канала.
"""

import logging
import struct
from math import gcd
from pathlib import Path

import numpy as np
from scipy import signal

from raganet.core.exceptions import InputFileNotFoundError, UnsupportedEncodingError, WavFormatError
from raganet.schemas.audio import AudioClip

logger = logging.getLogger(__name__)

WAVE_FORMAT_PCM = 0x0001
WAVE_FORMAT_IEEE_FLOAT = 0x0003
WAVE_FORMAT_EXTENSIBLE = 0xFFFE

PCM16_SCALE = 32768.0

# Полифазный фильтр-интерполятор: окно Кайзера, 64 отвода на фазу
RESAMPLE_TAPS_PER_PHASE = 64
RESAMPLE_KAISER_BETA = 8.6

_FORMAT_NAMES = {
    0x0002: "ADPCM",
    0x0006: "A-law",
    0x0007: "mu-law",
    0x0055: "MPEG Layer 3",
}


def _read_chunks(data: bytes) -> dict[bytes, bytes]:
    if len(data) < 12:
        raise WavFormatError("file is shorter than the RIFF header")
    riff, _, wave = struct.unpack_from("<4sI4s", data, 0)
    if riff != b"RIFF" or wave != b"WAVE":
        raise WavFormatError("missing RIFF/WAVE signature")

    chunks: dict[bytes, bytes] = {}
    offset = 12
    while offset + 8 <= len(data):
        chunk_id, size = struct.unpack_from("<4sI", data, offset)
        body_start = offset + 8
        body = data[body_start:body_start + size]
        if len(body) < size and chunk_id != b"data":
            raise WavFormatError(f"chunk {chunk_id!r} is truncated")
        chunks.setdefault(chunk_id, body)
        # чанки выравниваются по чётной границе
        offset = body_start + size + (size & 1)
    return chunks


def _describe_encoding(format_tag: int, bits: int) -> str:
    if format_tag == WAVE_FORMAT_PCM:
        return f"PCM {bits}-bit integer"
    if format_tag == WAVE_FORMAT_IEEE_FLOAT:
        return f"IEEE float {bits}-bit"
    name = _FORMAT_NAMES.get(format_tag, f"format tag 0x{format_tag:04x}")
    return f"{name} ({bits}-bit)"


def decode_wav(data: bytes, clip_id: str = "") -> AudioClip:
    """
    Декодирование WAV в моно-клип.

    Каналы усредняются по кадрам; значения вне [-1, 1] после сведения
    жёстко ограничиваются, их количество пишется в лог и в clip.clipped.

    Args:
        data: Байты RIFF/WAVE файла
        clip_id: Идентификатор клипа для метаданных

    Returns:
        AudioClip: Моно-клип с исходной частотой дискретизации

    Raises:
        WavFormatError: Повреждённый заголовок или нет чанков fmt/data
        UnsupportedEncodingError: Кодировка не PCM16/FLOAT32 или >2 каналов
    """
    chunks = _read_chunks(data)
    fmt = chunks.get(b"fmt ")
    if fmt is None or len(fmt) < 16:
        raise WavFormatError("missing or short 'fmt ' chunk")
    if b"data" not in chunks:
        raise WavFormatError("missing 'data' chunk")

    format_tag, channels, sample_rate, byte_rate, block_align, bits = struct.unpack_from(
        "<HHIIHH", fmt, 0
    )
    if format_tag == WAVE_FORMAT_EXTENSIBLE:
        if len(fmt) < 26:
            raise WavFormatError("extensible 'fmt ' chunk is too short")
        # первые два байта GUID подформата - обычный тег формата
        (format_tag,) = struct.unpack_from("<H", fmt, 24)

    if channels < 1 or sample_rate <= 0 or bits == 0:
        raise WavFormatError("invalid channel count, sample rate or bit depth")
    if block_align != channels * bits // 8:
        raise WavFormatError("block_align does not match channels and bit depth")

    if format_tag == WAVE_FORMAT_PCM and bits == 16:
        dtype = np.dtype("<i2")
    elif format_tag == WAVE_FORMAT_IEEE_FLOAT and bits == 32:
        dtype = np.dtype("<f4")
    else:
        raise UnsupportedEncodingError(_describe_encoding(format_tag, bits))
    if channels > 2:
        raise UnsupportedEncodingError(f"{channels} channels")

    payload = chunks[b"data"]
    frames = len(payload) // block_align
    raw = np.frombuffer(payload[:frames * block_align], dtype=dtype).reshape(frames, channels)

    if dtype.kind == "i":
        samples = raw.astype(np.float64) / PCM16_SCALE
    else:
        samples = raw.astype(np.float64)
    if not np.all(np.isfinite(samples)):
        raise WavFormatError("float samples contain NaN or Inf")

    mono = samples.mean(axis=1)
    clipped = int(np.count_nonzero(np.abs(mono) > 1.0))
    if clipped:
        logger.warning("Clipped %d samples outside [-1, 1] in clip '%s'", clipped, clip_id)
        mono = np.clip(mono, -1.0, 1.0)

    return AudioClip(
        samples=mono.astype(np.float32),
        sample_rate=int(sample_rate),
        clip_id=clip_id,
        clipped=clipped,
    )


def encode_wav(clip: AudioClip) -> bytes:
    """
    Кодирование клипа в моно WAV PCM16.

    Args:
        clip: Клип

    Returns:
        Байты WAV файла
    """
    scaled = np.round(clip.samples.astype(np.float64) * PCM16_SCALE)
    pcm = np.clip(scaled, -32768, 32767).astype("<i2").tobytes()

    header = struct.pack(
        "<4sI4s4sIHHIIHH4sI",
        b"RIFF",
        36 + len(pcm),
        b"WAVE",
        b"fmt ",
        16,
        WAVE_FORMAT_PCM,
        1,
        clip.sample_rate,
        clip.sample_rate * 2,
        2,
        16,
        b"data",
        len(pcm),
    )
    return header + pcm


def _resample_filter(up: int, down: int) -> np.ndarray:
    max_rate = max(up, down)
    half_len = RESAMPLE_TAPS_PER_PHASE // 2 * max_rate
    return signal.firwin(
        2 * half_len + 1,
        1.0 / max_rate,
        window=("kaiser", RESAMPLE_KAISER_BETA),
    )


def resample(clip: AudioClip, target_rate: int) -> AudioClip:
    """
    Полифазная передискретизация с оконным sinc (окно Кайзера).

    Длина результата - round(len * target / source).

    Args:
        clip: Исходный клип
        target_rate: Целевая частота в Гц (> 0)

    Returns:
        AudioClip: Клип с частотой target_rate

    Raises:
        ValueError: Если target_rate <= 0
    """
    if target_rate <= 0:
        raise ValueError("Целевая частота должна быть больше нуля")
    if clip.sample_rate == target_rate:
        return clip

    divisor = gcd(clip.sample_rate, target_rate)
    up, down = target_rate // divisor, clip.sample_rate // divisor
    target_length = int(round(clip.num_samples * target_rate / clip.sample_rate))

    if clip.num_samples == 0:
        return clip.with_samples(np.zeros(0, dtype=np.float32), sample_rate=target_rate)

    resampled = signal.resample_poly(
        clip.samples.astype(np.float64),
        up,
        down,
        window=_resample_filter(up, down),
    )
    if resampled.shape[0] >= target_length:
        resampled = resampled[:target_length]
    else:
        resampled = np.pad(resampled, (0, target_length - resampled.shape[0]))

    clipped = int(np.count_nonzero(np.abs(resampled) > 1.0))
    if clipped:
        logger.warning("Clipped %d resampled samples in clip '%s'", clipped, clip.clip_id)
        resampled = np.clip(resampled, -1.0, 1.0)

    return AudioClip(
        samples=resampled.astype(np.float32),
        sample_rate=target_rate,
        clip_id=clip.clip_id,
        clipped=clip.clipped + clipped,
    )


def load_clip(path: Path) -> AudioClip:
    """Чтение WAV с диска; id клипа - имя файла без расширения"""
    path = Path(path)
    if not path.is_file():
        raise InputFileNotFoundError(str(path), kind="audio file")
    return decode_wav(path.read_bytes(), clip_id=path.stem)


def save_clip(clip: AudioClip, path: Path) -> None:
    """Запись клипа на диск в PCM16"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_wav(clip))
