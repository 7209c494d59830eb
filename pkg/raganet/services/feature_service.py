"""
Извлечение признаков: спектр мощности STFT, нотный треугольный
банк фильтров и логарифмы энергий.
"""

import logging
import struct
from collections.abc import Iterator

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy import signal

from raganet.core.exceptions import (
    ClipTooShortError,
    DimensionError,
    FeatureFileError,
    FilterBankRangeError,
    FilterBankResolutionError,
    SampleRateMismatchError,
)
from raganet.schemas.audio import AudioClip
from raganet.schemas.features import (
    FeatureConfig,
    FeatureMatrix,
    FilterBank,
    FilterBankConfig,
    StftConfig,
)
from raganet.schemas.notes import NoteIndex
from raganet.services.notes_service import DEFAULT_TUNING_A4, midi_frequency

logger = logging.getLogger(__name__)

DEFAULT_EPSILON = 1e-10

# Кадров на блок при извлечении: ограничивает пик памяти на длинных клипах
FRAMES_PER_BLOCK = 256

FEATURE_MAGIC = b"RGFB"
FEATURE_FORMAT_VERSION = 1
FEATURE_HEADER = struct.Struct("<4sIII8s")
FEATURE_DTYPE = np.dtype("<f4")


def _check_clip(clip: AudioClip, cfg: StftConfig) -> None:
    if clip.sample_rate != cfg.sample_rate:
        raise SampleRateMismatchError(clip.sample_rate, cfg.sample_rate)
    if clip.num_samples < cfg.frame_size:
        raise ClipTooShortError(clip.num_samples, cfg.frame_size)


def iter_stft_power(
    clip: AudioClip,
    cfg: StftConfig,
    block_frames: int = FRAMES_PER_BLOCK,
) -> Iterator[np.ndarray]:
    """
    Спектр мощности по блокам кадров.

    Yields:
        Матрицы [<= block_frames x fft_size/2+1], подряд по времени
    """
    _check_clip(clip, cfg)
    window = signal.get_window(cfg.window, cfg.frame_size)
    frames = sliding_window_view(clip.samples.astype(np.float64), cfg.frame_size)[:: cfg.hop_size]

    for start in range(0, frames.shape[0], block_frames):
        block = frames[start:start + block_frames] * window
        spectrum = np.fft.rfft(block, n=cfg.fft_size, axis=1)
        yield spectrum.real ** 2 + spectrum.imag ** 2


def stft_power(clip: AudioClip, cfg: StftConfig) -> np.ndarray:
    """
    Спектр мощности |DFT|^2 окон Ханна.

    Кадр t покрывает отсчёты [t*hop, t*hop + frame_size) и дополняется
    нулями до fft_size перед преобразованием.

    Args:
        clip: Клип с частотой cfg.sample_rate
        cfg: Параметры STFT

    Returns:
        Матрица [кадры x (fft_size/2 + 1)], float64

    Raises:
        SampleRateMismatchError: Частота клипа не совпадает с конфигурацией
        ClipTooShortError: Клип короче одного кадра
    """
    blocks = list(iter_stft_power(clip, cfg))
    return np.concatenate(blocks, axis=0)


def build_filterbank(
    num_bins: int,
    anchor: NoteIndex,
    cfg: StftConfig,
    normalization: str = "area",
    tuning_a4: float = DEFAULT_TUNING_A4,
    epsilon: float = DEFAULT_EPSILON,
) -> FilterBank:
    """
    Треугольный банк фильтров с центрами на нотах 12-ТЕТ.

    Фильтр k: плечи на нотах anchor+k-1 и anchor+k+1, вершина на anchor+k.
    Веса считаются на линейной оси частот бинов спектра; в ближайшем к
    центру бине вес равен ровно 1.0. В режиме "area" строки затем делятся
    на свою сумму.

    По умолчанию "area": энергия строки - взвешенное среднее мощности по
    её носителю. С вершиной 1.0 более широкие (верхние) строки набирают
    больше энергии, пока нижние уже главного лепестка окна, и тон нижней
    ноты попадает в соседний бин. Вершина 1.0 доступна как normalization="apex".

    Args:
        num_bins: Число нотных бинов
        anchor: Нота нижнего бина
        cfg: Параметры STFT
        normalization: "area" или "apex"
        tuning_a4: Частота A4 в Гц
        epsilon: Добавка под логарифмом, хранится в конфигурации банка

    Returns:
        FilterBank

    Raises:
        FilterBankRangeError: Верхнее плечо не ниже частоты Найквиста
        FilterBankResolutionError: В носителе фильтра нет ни одного бина спектра
    """
    config = FeatureConfig(
        stft=cfg,
        filterbank=FilterBankConfig(
            num_bins=num_bins,
            anchor_midi=anchor.midi_number,
            normalization=normalization,
        ),
        epsilon=epsilon,
        tuning_a4=tuning_a4,
    )
    return build_filterbank_from_config(config)


def build_filterbank_from_config(config: FeatureConfig) -> FilterBank:
    """Банк фильтров по полной конфигурации признаков"""
    stft = config.stft
    anchor = config.filterbank.anchor_midi
    num_bins = config.filterbank.num_bins

    # ноты anchor-1 .. anchor+num_bins: плечи и центры всех фильтров
    edges = np.array(
        [midi_frequency(anchor + k, config.tuning_a4) for k in range(-1, num_bins + 1)]
    )
    if edges[-1] >= stft.nyquist:
        raise FilterBankRangeError(float(edges[-1]), stft.nyquist)

    freqs = np.arange(stft.num_spectrum_bins) * stft.sample_rate / stft.fft_size
    weights = np.zeros((num_bins, stft.num_spectrum_bins))

    for k in range(num_bins):
        left, center, right = edges[k], edges[k + 1], edges[k + 2]
        rising = (freqs - left) / (center - left)
        falling = (right - freqs) / (right - center)
        row = np.clip(np.minimum(rising, falling), 0.0, None)

        support = np.flatnonzero(row > 0)
        if support.size == 0:
            note = NoteIndex(midi_number=anchor + k).name
            raise FilterBankResolutionError(k, note, stft.fft_size)
        nearest = support[np.argmin(np.abs(freqs[support] - center))]
        row[nearest] = 1.0

        if config.filterbank.normalization == "area":
            row /= row.sum()
        weights[k] = row

    logger.debug(
        "Built filter bank: %d bins from %s, %d spectrum bins, %s normalization",
        num_bins,
        config.filterbank.anchor.name,
        stft.num_spectrum_bins,
        config.filterbank.normalization,
    )
    return FilterBank(
        weights=weights,
        center_freqs=tuple(float(f) for f in edges[1:-1]),
        config=config,
    )


def _log_energies(power: np.ndarray, fb: FilterBank) -> np.ndarray:
    energies = power @ fb.weights.T
    return np.log(energies + fb.config.epsilon)


def apply_filterbank(power: np.ndarray, fb: FilterBank, clip_id: str = "") -> FeatureMatrix:
    """
    Логарифмы энергий фильтров: ln(power @ W^T + eps).

    Args:
        power: Спектр мощности [кадры x бины спектра]
        fb: Банк фильтров
        clip_id: Идентификатор клипа для метаданных

    Returns:
        FeatureMatrix [кадры x нотные бины]

    Raises:
        DimensionError: Число столбцов спектра не совпадает с банком
    """
    power = np.asarray(power, dtype=np.float64)
    if power.ndim != 2 or power.shape[1] != fb.num_spectrum_bins:
        raise DimensionError(
            "power spectrum does not match the filter bank",
            expected=("frames", fb.num_spectrum_bins),
            actual=power.shape,
        )
    return FeatureMatrix(
        values=_log_energies(power, fb),
        config_hash=fb.config_hash,
        clip_id=clip_id,
    )


def extract_features(clip: AudioClip, cfg: StftConfig, fb: FilterBank) -> FeatureMatrix:
    """
    Композиция stft_power и apply_filterbank, блоками по кадрам.

    Raises:
        DimensionError: cfg отличается от конфигурации, по которой построен банк
        SampleRateMismatchError, ClipTooShortError: из stft_power
    """
    if cfg != fb.config.stft:
        raise DimensionError(
            "STFT config differs from the one the filter bank was built for",
            expected=fb.config.stft.model_dump(),
            actual=cfg.model_dump(),
        )
    blocks = [_log_energies(power, fb) for power in iter_stft_power(clip, cfg)]
    return FeatureMatrix(
        values=np.concatenate(blocks, axis=0),
        config_hash=fb.config_hash,
        clip_id=clip.clip_id,
    )


class FeatureExtractor:
    """
    Извлекатель признаков с заранее построенным банком фильтров.

    Неизменяем после создания; один экземпляр можно использовать из
    нескольких потоков.
    """

    def __init__(self, config: FeatureConfig):
        self.config = config
        self.filterbank = build_filterbank_from_config(config)

    @property
    def config_hash(self) -> str:
        return self.filterbank.config_hash

    def extract(self, clip: AudioClip) -> FeatureMatrix:
        return extract_features(clip, self.config.stft, self.filterbank)

    def extract_many(self, clips: list[AudioClip]) -> list[FeatureMatrix]:
        return [self.extract(clip) for clip in clips]


def write_features(fm: FeatureMatrix) -> bytes:
    """
    Сериализация матрицы признаков.

    Формат (little-endian): "RGFB", версия u32, кадры u32, бины u32,
    8 байт хэша конфигурации, затем float32 построчно.
    """
    header = FEATURE_HEADER.pack(
        FEATURE_MAGIC,
        FEATURE_FORMAT_VERSION,
        fm.num_frames,
        fm.num_bins,
        bytes.fromhex(fm.config_hash),
    )
    return header + fm.values.astype(FEATURE_DTYPE).tobytes()


def read_features(data: bytes, clip_id: str = "") -> FeatureMatrix:
    """
    Разбор файла признаков.

    Raises:
        FeatureFileError: Неверная сигнатура, версия или размер данных
    """
    if len(data) < FEATURE_HEADER.size:
        raise FeatureFileError("file is shorter than the header")
    magic, version, frames, bins, digest = FEATURE_HEADER.unpack_from(data, 0)
    if magic != FEATURE_MAGIC:
        raise FeatureFileError(f"bad magic {magic!r}")
    if version != FEATURE_FORMAT_VERSION:
        raise FeatureFileError(f"unsupported format version {version}")

    payload = data[FEATURE_HEADER.size:]
    expected = frames * bins * FEATURE_DTYPE.itemsize
    if len(payload) != expected:
        raise FeatureFileError(f"payload has {len(payload)} bytes, expected {expected}")

    values = np.frombuffer(payload, dtype=FEATURE_DTYPE).reshape(frames, bins)
    try:
        return FeatureMatrix(values=values, config_hash=digest.hex(), clip_id=clip_id)
    except ValueError as exc:
        raise FeatureFileError(f"invalid feature values: {exc}") from exc
