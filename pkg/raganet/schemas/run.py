from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from raganet.schemas.audio import SegmentationConfig
from raganet.schemas.features import FeatureConfig
from raganet.schemas.model import ArchitectureConfig
from raganet.schemas.synth import SynthConfig
from raganet.schemas.training import TrainConfig

# Мелакарты настольного набора: попарно различаются хотя бы одной сварой
DESK_MELAKARTAS = (1, 8, 15, 20, 22, 29, 57, 65)


class DatasetConfig(BaseModel):
    """Откуда брать гаммы и куда складывать клипы и признаки"""

    scales_file: str | None = None
    melakartas: tuple[int, ...] = DESK_MELAKARTAS
    per_class: int = Field(default=40, gt=0)
    shruti: tuple[float, ...] = (130.81, 196.00)
    data_dir: str = "data"
    features_dir: str = "features"

    model_config = ConfigDict(
        extra="forbid",
        frozen=True,
    )

    @field_validator("melakartas")
    @classmethod
    def validate_melakartas(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        if not v or any(not 1 <= number <= 72 for number in v):
            raise ValueError("Номера мелакарт должны лежать в 1..72")
        if len(set(v)) != len(v):
            raise ValueError("Номера мелакарт не должны повторяться")
        return v

    @field_validator("shruti")
    @classmethod
    def validate_shruti(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        if not v or any(tonic <= 0 for tonic in v):
            raise ValueError("Нужна хотя бы одна положительная тоника")
        return v


class RunConfig(BaseModel):
    """
    Полная конфигурация запуска CLI.

    Собирается из пресета, YAML-файла и флагов командной строки
    (в этом порядке) и сохраняется рядом с логом запуска.
    """

    preset: Literal["desk", "paper"] = "desk"
    seed: int = Field(default=0, ge=0)
    workers: int = Field(default=4, gt=0)
    segmentation: SegmentationConfig = SegmentationConfig()
    features: FeatureConfig = FeatureConfig()
    architecture: ArchitectureConfig = ArchitectureConfig()
    training: TrainConfig = TrainConfig()
    synth: SynthConfig = SynthConfig()
    dataset: DatasetConfig = DatasetConfig()

    model_config = ConfigDict(
        extra="forbid",
        frozen=True,
    )

    @model_validator(mode="after")
    def validate_sample_rates(self) -> "RunConfig":
        rates = {
            self.segmentation.sample_rate,
            self.features.stft.sample_rate,
            self.synth.sample_rate,
        }
        if len(rates) != 1:
            raise ValueError("Частоты дискретизации нарезки, STFT и синтеза должны совпадать")
        return self
