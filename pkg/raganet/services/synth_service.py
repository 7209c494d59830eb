"""
Синтез размеченных клипов по гаммам раг.

Каждый клип - арохана и аварохана, свары как синусоиды (опционально
3 гармоники) с гамаками, плавными переходами и белым шумом.
"""

import logging
import re
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
from tqdm import tqdm

from raganet.core.exceptions import PitchRangeError
from raganet.repositories.manifests import ManifestRepository
from raganet.schemas.audio import AudioClip
from raganet.schemas.notes import ScaleSpec
from raganet.schemas.synth import GamakaMode, SynthConfig
from raganet.schemas.training import ManifestRow
from raganet.services.audio_service import save_clip

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.csv"
WAV_DIR = "wav"


def _note_time(cfg: SynthConfig) -> np.ndarray:
    return np.arange(cfg.note_samples) / cfg.sample_rate


def synth_gamaka(base_ratio: float, mode: GamakaMode, cfg: SynthConfig) -> np.ndarray:
    """
    Траектория высоты одной свары, Гц на отсчёт.

    - none: постоянная tonic * ratio
    - kampita: синусоидальная модуляция с частотой kampita_rate_hz между
      соседними полутонами сверху и снизу
    - jaru: линейный в полутонах подъезд с расстояния jaru_semitones
      к целевой частоте за первую jaru_fraction длительности ноты

    Args:
        base_ratio: Отношение свары к Sa
        mode: Гамака
        cfg: Параметры синтеза

    Returns:
        Массив длины cfg.note_samples
    """
    base = cfg.tonic_hz * base_ratio
    count = cfg.note_samples
    mode = GamakaMode(mode)

    if mode is GamakaMode.NONE:
        return np.full(count, base)

    if mode is GamakaMode.KAMPITA:
        offset = np.sin(2.0 * np.pi * cfg.kampita_rate_hz * _note_time(cfg))
        return base * np.exp2(offset / 12.0)

    # jaru
    glide = cfg.jaru_fraction * count
    remaining = np.clip(1.0 - np.arange(count) / glide, 0.0, 1.0)
    sign = -1.0 if cfg.jaru_from == "below" else 1.0
    return base * np.exp2(sign * cfg.jaru_semitones * remaining / 12.0)


def synth_pitch_track(scale: ScaleSpec, cfg: SynthConfig) -> np.ndarray:
    """
    Траектория высоты всего клипа: арохана, затем аварохана.

    Соседние свары сшиваются косинусным переходом логарифма частоты
    длиной crossfade_seconds, центрированным на границе нот.

    Raises:
        PitchRangeError: Частота вне [min_pitch_hz, max_pitch_hz]
    """
    notes = [synth_gamaka(ratio, cfg.gamaka, cfg) for ratio in scale.ratios]
    log_pitch = np.log2(np.concatenate(notes))

    half = int(round(cfg.crossfade_seconds * cfg.sample_rate)) // 2
    if half > 0:
        ramp = 0.5 - 0.5 * np.cos(np.pi * (np.arange(2 * half) + 0.5) / (2 * half))
        for boundary in range(cfg.note_samples, log_pitch.shape[0], cfg.note_samples):
            lo, hi = max(boundary - half, 0), min(boundary + half, log_pitch.shape[0])
            before, after = log_pitch[boundary - 1], log_pitch[boundary]
            window = ramp[lo - (boundary - half):hi - (boundary - half)]
            log_pitch[lo:hi] = before + (after - before) * window

    track = np.exp2(log_pitch)
    low, high = float(track.min()), float(track.max())
    if low < cfg.min_pitch_hz:
        raise PitchRangeError(low, cfg.min_pitch_hz, cfg.max_pitch_hz)
    if high > cfg.max_pitch_hz:
        raise PitchRangeError(high, cfg.min_pitch_hz, cfg.max_pitch_hz)
    return track


def render_pitch_track(track: np.ndarray, cfg: SynthConfig) -> np.ndarray:
    """
    Генератор с непрерывной фазой по траектории частоты, плюс шум.

    Шум - белый гауссов с RMS = (amplitude / sqrt(2)) * 10^(noise_db / 20),
    то есть noise_db относительно RMS синусоиды.
    """
    phase = 2.0 * np.pi * np.concatenate([[0.0], np.cumsum(track[:-1])]) / cfg.sample_rate

    harmonics = range(1, cfg.harmonics + 1)
    norm = sum(1.0 / h for h in harmonics)
    tone = sum(np.sin(h * phase) / h for h in harmonics) * (cfg.amplitude / norm)

    rng = np.random.default_rng(cfg.seed)
    noise_rms = cfg.amplitude / np.sqrt(2.0) * 10.0 ** (cfg.noise_db / 20.0)
    noisy = tone + noise_rms * rng.standard_normal(track.shape[0])
    return np.clip(noisy, -1.0, 1.0)


def synth_scale_clip(scale: ScaleSpec, cfg: SynthConfig, clip_id: str = "") -> AudioClip:
    """
    Клип по гамме раги.

    Длительность - ровно note_samples * (len(арохана) + len(аварохана)).
    Один и тот же seed даёт побитово одинаковый клип.

    Args:
        scale: Гамма
        cfg: Параметры синтеза
        clip_id: Идентификатор клипа

    Returns:
        AudioClip с частотой cfg.sample_rate

    Raises:
        PitchRangeError: Высота выходит за диапазон банка фильтров
    """
    track = synth_pitch_track(scale, cfg)
    return AudioClip(
        samples=render_pitch_track(track, cfg).astype(np.float32),
        sample_rate=cfg.sample_rate,
        clip_id=clip_id or scale.name,
    )


def slugify(name: str) -> str:
    """Имя раги -> безопасное имя файла"""
    slug = re.sub(r"[^0-9a-zA-Z]+", "_", name.strip().lower()).strip("_")
    return slug or "raga"


class SynthDatasetService:
    """
    Генерация синтетического датасета: WAV-файлы и манифест.

    Клипы считаются в пуле потоков; порядок строк манифеста фиксирован
    (класс за классом, клип за клипом) и не зависит от числа потоков.
    """

    def __init__(self, out_dir: Path, workers: int = 1, progress: bool = False):
        self.out_dir = Path(out_dir)
        self.workers = max(1, workers)
        self.progress = progress
        self.manifests = ManifestRepository(self.out_dir)

    def plan(
        self,
        scales: list[ScaleSpec],
        per_class: int,
        shruti_set: list[float],
        cfg: SynthConfig,
    ) -> list[tuple[ScaleSpec, SynthConfig, str]]:
        """
        Список (гамма, конфигурация клипа, относительный путь) в порядке манифеста.

        seed клипа = cfg.seed + номер_класса * per_class + i; тоники идут
        по кругу из shruti_set.
        """
        if per_class <= 0:
            raise ValueError("per_class должен быть больше нуля")
        if not shruti_set:
            raise ValueError("Нужна хотя бы одна тоника")

        jobs = []
        for class_index, scale in enumerate(scales):
            slug = slugify(scale.name)
            for i in range(per_class):
                clip_cfg = cfg.for_clip(
                    tonic_hz=shruti_set[i % len(shruti_set)],
                    seed=cfg.seed + class_index * per_class + i,
                )
                jobs.append((scale, clip_cfg, f"{WAV_DIR}/{slug}/{slug}_{i:03d}.wav"))
        return jobs

    def _render(self, job: tuple[ScaleSpec, SynthConfig, str]) -> ManifestRow:
        scale, clip_cfg, relative = job
        recording_id = Path(relative).stem
        clip = synth_scale_clip(scale, clip_cfg, clip_id=recording_id)
        save_clip(clip, self.out_dir / relative)
        return ManifestRow(
            path=relative,
            raga=scale.name,
            recording_id=recording_id,
            tonic_hz=clip_cfg.tonic_hz,
        )

    def generate(
        self,
        scales: list[ScaleSpec],
        per_class: int,
        shruti_set: list[float],
        cfg: SynthConfig,
    ) -> list[ManifestRow]:
        """
        Сгенерировать клипы и записать manifest.csv в out_dir.

        Returns:
            Строки манифеста
        """
        jobs = self.plan(scales, per_class, shruti_set, cfg)
        logger.info(
            "Synthesizing %d clips: %d ragas x %d, tonics %s, gamaka %s",
            len(jobs),
            len(scales),
            per_class,
            shruti_set,
            cfg.gamaka.value,
        )
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            rows = list(
                tqdm(
                    pool.map(self._render, jobs),
                    total=len(jobs),
                    desc="synth",
                    disable=not self.progress,
                )
            )
        self.manifests.save(rows, MANIFEST_NAME)
        logger.info("Wrote %d clips and %s", len(rows), self.out_dir / MANIFEST_NAME)
        return rows


def synth_dataset(
    scales: list[ScaleSpec],
    per_class: int,
    shruti_set: list[float],
    cfg: SynthConfig,
    out_dir: Path,
    workers: int = 1,
) -> list[ManifestRow]:
    """Функциональная обёртка над SynthDatasetService.generate"""
    return SynthDatasetService(out_dir, workers=workers).generate(scales, per_class, shruti_set, cfg)
