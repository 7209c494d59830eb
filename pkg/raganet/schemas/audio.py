import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from raganet.utils.validators import validate_positive, validate_unit_fraction


# Клип - единица, проходящая через предобработку
class AudioClip(BaseModel):
    """
    Моно-клип: отсчёты float32 в [-1, 1] и частота дискретизации.

    Массив отсчётов копируется и помечается только для чтения,
    поэтому клип неизменяем после создания.
    """

    samples: np.ndarray
    sample_rate: int = Field(..., gt=0)
    clip_id: str = ""
    clipped: int = Field(default=0, ge=0)

    model_config = ConfigDict(
        arbitrary_types_allowed=True,
        frozen=True,
    )

    @field_validator("samples", mode="before")
    @classmethod
    def validate_samples(cls, v) -> np.ndarray:
        arr = np.array(v, dtype=np.float32, copy=True)
        if arr.ndim != 1:
            raise ValueError("Отсчёты клипа должны быть одномерным массивом")
        if arr.size and not np.all(np.isfinite(arr)):
            raise ValueError("Отсчёты клипа должны быть конечными")
        if arr.size and float(np.max(np.abs(arr))) > 1.0:
            raise ValueError("Отсчёты клипа должны лежать в [-1, 1]")
        arr.flags.writeable = False
        return arr

    @property
    def num_samples(self) -> int:
        return int(self.samples.shape[0])

    @property
    def duration_seconds(self) -> float:
        return self.num_samples / self.sample_rate

    def with_samples(self, samples: np.ndarray, sample_rate: int | None = None) -> "AudioClip":
        """Новый клип с теми же метаданными и другими отсчётами"""
        return AudioClip(
            samples=samples,
            sample_rate=sample_rate or self.sample_rate,
            clip_id=self.clip_id,
            clipped=self.clipped,
        )


class SegmentationConfig(BaseModel):
    """Параметры обрезки и нарезки клипов на сегменты"""

    trim_fraction: float = 0.10
    segment_seconds: float = 30.0
    sample_rate: int = Field(default=22050, gt=0)

    model_config = ConfigDict(
        extra="forbid",
        frozen=True,
    )

    @field_validator("trim_fraction")
    @classmethod
    def validate_trim(cls, v: float) -> float:
        return validate_unit_fraction(v, upper=0.5)

    @field_validator("segment_seconds")
    @classmethod
    def validate_segment_seconds(cls, v: float) -> float:
        return validate_positive(v)

    @property
    def segment_samples(self) -> int:
        samples = int(round(self.segment_seconds * self.sample_rate))
        return max(samples, 1)
