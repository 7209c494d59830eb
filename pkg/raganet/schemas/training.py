from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from raganet.utils.validators import validate_non_empty, validate_open_fraction

MANIFEST_COLUMNS = ("path", "raga", "recording_id", "tonic_hz")
FEATURE_MANIFEST_COLUMNS = MANIFEST_COLUMNS + ("segment", "feature_path")


class ManifestRow(BaseModel):
    """Строка манифеста: клип, рага, запись-источник, тоника"""

    path: str
    raga: str
    recording_id: str
    tonic_hz: float | None = Field(default=None, gt=0)
    segment: int | None = Field(default=None, ge=0)
    feature_path: str | None = None

    model_config = ConfigDict(
        extra="forbid",
        str_strip_whitespace=True,
        frozen=True,
    )

    @field_validator("path", "raga", "recording_id")
    @classmethod
    def validate_required(cls, v: str) -> str:
        return validate_non_empty(v)


class TrainConfig(BaseModel):
    """Параметры цикла обучения и разбиения датасета"""

    epochs: int = Field(default=300, gt=0)
    batch_size: int = Field(default=256, gt=0)
    patience: int = Field(default=100, gt=0)
    split_fraction: float = 0.80
    learning_rate: float = Field(default=0.001, gt=0)
    min_delta: float = Field(default=0.0, ge=0)
    split_mode: Literal["recording", "clip"] = "recording"
    seed: int = Field(default=0, ge=0)
    record_timing: bool = True

    model_config = ConfigDict(
        extra="forbid",
        frozen=True,
    )

    @field_validator("split_fraction")
    @classmethod
    def validate_split(cls, v: float) -> float:
        return validate_open_fraction(v)

    @model_validator(mode="after")
    def validate_patience(self) -> "TrainConfig":
        if self.patience > self.epochs:
            raise ValueError("patience не может превышать число эпох")
        return self


class EpochRecord(BaseModel):
    """Метрики одной эпохи"""

    epoch: int = Field(..., ge=1)
    train_loss: float = Field(..., ge=0)
    train_accuracy: float = Field(..., ge=0, le=1)
    val_loss: float = Field(..., ge=0)
    val_accuracy: float = Field(..., ge=0, le=1)
    seconds: float = Field(default=0.0, ge=0)

    model_config = ConfigDict(frozen=True)


class EvaluationResult(BaseModel):
    """Потеря, точность и матрица ошибок [истина x предсказание]"""

    loss: float
    accuracy: float
    confusion: np.ndarray

    model_config = ConfigDict(
        arbitrary_types_allowed=True,
        frozen=True,
    )

    def normalized(self) -> np.ndarray:
        """Матрица ошибок с нормировкой строк (пустые строки остаются нулевыми)"""
        counts = self.confusion.astype(np.float64)
        totals = counts.sum(axis=1, keepdims=True)
        return np.divide(counts, totals, out=np.zeros_like(counts), where=totals > 0)


class RankedPrediction(BaseModel):
    """Рага и её вероятность"""

    raga: str
    probability: float = Field(..., ge=0, le=1)

    model_config = ConfigDict(frozen=True)
