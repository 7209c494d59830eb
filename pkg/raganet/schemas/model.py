from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

Shape = tuple[int, ...]


class _LayerSpecBase(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    def output_shape(self, input_shape: Shape) -> Shape:
        return input_shape


class Conv1DSpec(_LayerSpecBase):
    """Свёртка по времени без паддинга, шаг 1: веса [out x in x k]"""

    type: Literal["conv1d"] = "conv1d"
    in_channels: int = Field(..., gt=0)
    out_channels: int = Field(default=64, gt=0)
    kernel_size: int = Field(default=3, gt=0)

    def output_shape(self, input_shape: Shape) -> Shape:
        if len(input_shape) != 2 or input_shape[1] != self.in_channels:
            raise ValueError(f"conv1d ожидает [T x {self.in_channels}], получено {input_shape}")
        frames = input_shape[0] - self.kernel_size + 1
        if frames <= 0:
            raise ValueError("Последовательность короче ядра свёртки")
        return (frames, self.out_channels)


class MaxPool1DSpec(_LayerSpecBase):
    type: Literal["maxpool1d"] = "maxpool1d"
    pool_size: int = Field(default=2, gt=0)
    stride: int = Field(default=2, gt=0)

    def output_shape(self, input_shape: Shape) -> Shape:
        if len(input_shape) != 2:
            raise ValueError(f"maxpool1d ожидает [T x C], получено {input_shape}")
        frames = (input_shape[0] - self.pool_size) // self.stride + 1
        if frames <= 0:
            raise ValueError("Последовательность короче окна пулинга")
        return (frames, input_shape[1])


class BatchNorm1DSpec(_LayerSpecBase):
    type: Literal["batchnorm1d"] = "batchnorm1d"
    channels: int = Field(..., gt=0)
    momentum: float = Field(default=0.9, ge=0, lt=1)
    epsilon: float = Field(default=1e-5, gt=0)

    def output_shape(self, input_shape: Shape) -> Shape:
        if input_shape[-1] != self.channels:
            raise ValueError(f"batchnorm1d ожидает {self.channels} каналов, получено {input_shape}")
        return input_shape


class ReLUSpec(_LayerSpecBase):
    type: Literal["relu"] = "relu"


class LSTMSpec(_LayerSpecBase):
    """LSTM с порядком вентилей (i, f, g, o), возвращает всю последовательность"""

    type: Literal["lstm"] = "lstm"
    input_size: int = Field(..., gt=0)
    hidden_size: int = Field(default=512, gt=0)
    forget_bias: float = 1.0

    def output_shape(self, input_shape: Shape) -> Shape:
        if len(input_shape) != 2 or input_shape[1] != self.input_size:
            raise ValueError(f"lstm ожидает [T x {self.input_size}], получено {input_shape}")
        return (input_shape[0], self.hidden_size)


class FlattenSpec(_LayerSpecBase):
    type: Literal["flatten"] = "flatten"

    def output_shape(self, input_shape: Shape) -> Shape:
        size = 1
        for dim in input_shape:
            size *= dim
        return (size,)


class DenseSpec(_LayerSpecBase):
    type: Literal["dense"] = "dense"
    in_features: int = Field(..., gt=0)
    out_features: int = Field(..., gt=0)

    def output_shape(self, input_shape: Shape) -> Shape:
        if input_shape != (self.in_features,):
            raise ValueError(f"dense ожидает ({self.in_features},), получено {input_shape}")
        return (self.out_features,)


class DropoutSpec(_LayerSpecBase):
    type: Literal["dropout"] = "dropout"
    rate: float = Field(default=0.5, ge=0, lt=1)


class SoftmaxSpec(_LayerSpecBase):
    type: Literal["softmax"] = "softmax"


LayerSpec = Annotated[
    Union[
        Conv1DSpec,
        MaxPool1DSpec,
        BatchNorm1DSpec,
        ReLUSpec,
        LSTMSpec,
        FlattenSpec,
        DenseSpec,
        DropoutSpec,
        SoftmaxSpec,
    ],
    Field(discriminator="type"),
]


class ModelConfig(BaseModel):
    """
    Последовательная архитектура: список слоёв, форма входа, число классов.

    Валидатор прогоняет форму входа через все слои, поэтому
    несовместимые соседние слои отклоняются при создании.
    """

    layers: list[LayerSpec]
    num_classes: int = Field(default=172, gt=0)
    input_frames: int = Field(..., gt=0)
    input_bins: int = Field(..., gt=0)
    seed: int = Field(default=0, ge=0)

    model_config = ConfigDict(
        extra="forbid",
        frozen=True,
    )

    @model_validator(mode="after")
    def validate_shapes(self) -> "ModelConfig":
        if not self.layers:
            raise ValueError("Модель должна содержать хотя бы один слой")
        shapes = self.layer_shapes()
        if shapes[-1] != (self.num_classes,):
            raise ValueError(
                f"Выход модели {shapes[-1]} не совпадает с числом классов {self.num_classes}"
            )
        return self

    @property
    def input_shape(self) -> Shape:
        return (self.input_frames, self.input_bins)

    def layer_shapes(self) -> list[Shape]:
        """Формы выходов всех слоёв (без оси батча)"""
        shapes = []
        shape: Shape = self.input_shape
        for spec in self.layers:
            shape = spec.output_shape(shape)
            shapes.append(shape)
        return shapes


class ArchitectureConfig(BaseModel):
    """Гиперпараметры стека Conv -> Pool -> BN -> ReLU -> LSTM -> Dense"""

    conv_filters: int = Field(default=64, gt=0)
    kernel_size: int = Field(default=3, gt=0)
    pool_size: int = Field(default=2, gt=0)
    lstm_units: int = Field(default=512, gt=0)
    dense_units: tuple[int, ...] = (512, 256)
    dropout: float = Field(default=0.5, ge=0, lt=1)

    model_config = ConfigDict(
        extra="forbid",
        frozen=True,
    )


class LayerParameters(BaseModel):
    """Строка таблицы параметров"""

    index: int
    layer: str
    output_shape: Shape
    trainable: int
    non_trainable: int

    model_config = ConfigDict(frozen=True)


class ParameterReport(BaseModel):
    """Подсчёт параметров по слоям"""

    rows: tuple[LayerParameters, ...]

    model_config = ConfigDict(frozen=True)

    @property
    def trainable(self) -> int:
        return sum(row.trainable for row in self.rows)

    @property
    def non_trainable(self) -> int:
        return sum(row.non_trainable for row in self.rows)

    @property
    def total(self) -> int:
        return self.trainable + self.non_trainable

    def format_table(self) -> str:
        lines = [f"{'#':>3}  {'layer':<12} {'output':<16} {'trainable':>12} {'non-trainable':>14}"]
        for row in self.rows:
            shape = "x".join(str(dim) for dim in row.output_shape)
            lines.append(
                f"{row.index:>3}  {row.layer:<12} {shape:<16} {row.trainable:>12,} {row.non_trainable:>14,}"
            )
        lines.append(f"total trainable: {self.trainable:,}  non-trainable: {self.non_trainable:,}")
        return "\n".join(lines)
