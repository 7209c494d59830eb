import enum
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from raganet.utils.validators import validate_positive, validate_unit_fraction

# Внешние плечи банка фильтров по умолчанию: A#1 и G6 (56 бинов от B1)
DEFAULT_MIN_PITCH_HZ = 58.27047018976124
DEFAULT_MAX_PITCH_HZ = 1567.981743926997


class GamakaMode(str, enum.Enum):
    """Модели гамак для синтеза"""
    NONE = "none"
    KAMPITA = "kampita"
    JARU = "jaru"


class SynthConfig(BaseModel):
    """
    Параметры синтеза клипа по гамме раги.

    seed полностью определяет результат.
    """

    tonic_hz: float = 130.81
    note_seconds: float = 0.5
    gamaka: GamakaMode = GamakaMode.NONE
    noise_db: float = -40.0
    seed: int = Field(default=0, ge=0, lt=2**64)
    sample_rate: int = Field(default=22050, gt=0)
    amplitude: float = Field(default=0.5, gt=0, le=1.0)
    harmonics: int = Field(default=1)
    crossfade_seconds: float = Field(default=0.01, ge=0)
    kampita_rate_hz: float = 6.0
    jaru_semitones: float = 2.0
    jaru_fraction: float = 0.3
    jaru_from: Literal["below", "above"] = "below"
    min_pitch_hz: float = DEFAULT_MIN_PITCH_HZ
    max_pitch_hz: float = DEFAULT_MAX_PITCH_HZ

    model_config = ConfigDict(
        extra="forbid",
        frozen=True,
    )

    @field_validator("tonic_hz", "note_seconds", "kampita_rate_hz", "jaru_semitones")
    @classmethod
    def validate_positive_fields(cls, v: float) -> float:
        return validate_positive(v)

    @field_validator("jaru_fraction")
    @classmethod
    def validate_jaru_fraction(cls, v: float) -> float:
        if v == 0:
            raise ValueError("Доля глиссандо должна быть больше нуля")
        return validate_unit_fraction(v, upper=1.0)

    @field_validator("harmonics")
    @classmethod
    def validate_harmonics(cls, v: int) -> int:
        if v not in (1, 3):
            raise ValueError("Поддерживаются тембры из 1 или 3 гармоник")
        return v

    @model_validator(mode="after")
    def validate_pitch_range(self) -> "SynthConfig":
        if not 0 < self.min_pitch_hz < self.max_pitch_hz:
            raise ValueError("Нужно 0 < min_pitch_hz < max_pitch_hz")
        return self

    @property
    def note_samples(self) -> int:
        return int(round(self.note_seconds * self.sample_rate))

    def for_clip(self, tonic_hz: float, seed: int) -> "SynthConfig":
        """Копия конфигурации для отдельного клипа датасета"""
        return self.model_copy(update={"tonic_hz": tonic_hz, "seed": seed})
