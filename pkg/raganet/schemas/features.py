import hashlib
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from raganet.schemas.notes import NoteIndex
from raganet.utils.validators import validate_positive, validate_power_of_two

CONFIG_HASH_BYTES = 8


class StftConfig(BaseModel):
    """
    Параметры кратковременного преобразования Фурье.

    frame_size - длина окна анализа (Ханн), fft_size - длина ДПФ
    после дополнения кадра нулями.
    """

    frame_size: int = 2048
    hop_size: int = 512
    fft_size: int = 16384
    window: Literal["hann"] = "hann"
    sample_rate: int = Field(default=22050, gt=0)

    model_config = ConfigDict(
        extra="forbid",
        frozen=True,
    )

    @field_validator("frame_size", "fft_size")
    @classmethod
    def validate_sizes(cls, v: int) -> int:
        return validate_power_of_two(v)

    @model_validator(mode="after")
    def validate_framing(self) -> "StftConfig":
        if not 0 < self.hop_size <= self.frame_size:
            raise ValueError("hop_size должен лежать в (0, frame_size]")
        if self.fft_size < self.frame_size:
            raise ValueError("fft_size не может быть меньше frame_size")
        return self

    @property
    def num_spectrum_bins(self) -> int:
        return self.fft_size // 2 + 1

    @property
    def nyquist(self) -> float:
        return self.sample_rate / 2.0

    def num_frames(self, num_samples: int) -> int:
        if num_samples < self.frame_size:
            return 0
        return (num_samples - self.frame_size) // self.hop_size + 1


class FilterBankConfig(BaseModel):
    """Сетка нотных фильтров: число бинов, нижняя нота, нормировка строк"""

    num_bins: int = Field(default=56, gt=0)
    anchor_midi: int = Field(default=35, ge=1, le=126)
    normalization: Literal["area", "apex"] = "area"

    model_config = ConfigDict(
        extra="forbid",
        frozen=True,
    )

    @property
    def anchor(self) -> NoteIndex:
        return NoteIndex(midi_number=self.anchor_midi)


class FeatureConfig(BaseModel):
    """
    Полная конфигурация извлечения признаков.

    Хэш этой записи пишется в каждый файл признаков, чтобы признаки
    с разной конфигурацией нельзя было смешать.
    """

    stft: StftConfig = StftConfig()
    filterbank: FilterBankConfig = FilterBankConfig()
    epsilon: float = 1e-10
    tuning_a4: float = 440.0

    model_config = ConfigDict(
        extra="forbid",
        frozen=True,
    )

    @field_validator("epsilon", "tuning_a4")
    @classmethod
    def validate_positive_fields(cls, v: float) -> float:
        return validate_positive(v)

    def config_hash(self) -> str:
        digest = hashlib.blake2b(
            self.model_dump_json().encode("utf-8"),
            digest_size=CONFIG_HASH_BYTES,
        )
        return digest.hexdigest()


class FilterBank(BaseModel):
    """Матрица треугольных весов: бины спектра -> нотные бины"""

    weights: np.ndarray
    center_freqs: tuple[float, ...]
    config: FeatureConfig

    model_config = ConfigDict(
        arbitrary_types_allowed=True,
        frozen=True,
    )

    @field_validator("weights")
    @classmethod
    def validate_weights(cls, v: np.ndarray) -> np.ndarray:
        if v.ndim != 2:
            raise ValueError("Матрица весов должна быть двумерной")
        if np.any(v < 0):
            raise ValueError("Веса фильтров должны быть неотрицательны")
        v = v.astype(np.float64, copy=True)
        v.flags.writeable = False
        return v

    @property
    def anchor(self) -> NoteIndex:
        return self.config.filterbank.anchor

    @property
    def config_hash(self) -> str:
        return self.config.config_hash()

    @property
    def num_bins(self) -> int:
        return int(self.weights.shape[0])

    @property
    def num_spectrum_bins(self) -> int:
        return int(self.weights.shape[1])


class FeatureMatrix(BaseModel):
    """Логарифмы энергий фильтров: [кадры x нотные бины]"""

    values: np.ndarray
    config_hash: str = Field(..., pattern=r"^[0-9a-f]{16}$")
    clip_id: str = ""

    model_config = ConfigDict(
        arbitrary_types_allowed=True,
        frozen=True,
    )

    @field_validator("values", mode="before")
    @classmethod
    def validate_values(cls, v) -> np.ndarray:
        arr = np.array(v, dtype=np.float32, copy=True)
        if arr.ndim != 2:
            raise ValueError("Матрица признаков должна быть двумерной")
        if arr.size and not np.all(np.isfinite(arr)):
            raise ValueError("Признаки должны быть конечными")
        arr.flags.writeable = False
        return arr

    @property
    def num_frames(self) -> int:
        return int(self.values.shape[0])

    @property
    def num_bins(self) -> int:
        return int(self.values.shape[1])
