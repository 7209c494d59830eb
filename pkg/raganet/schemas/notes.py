import re

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from raganet.core.exceptions import ScaleValidationError
from raganet.utils.validators import validate_non_empty

PITCH_CLASSES = ("C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B")

# 13 допустимых отношений к Sa: 2^(k/12), k = 0..12
SCALE_RATIOS = tuple(2.0 ** (k / 12) for k in range(13))
RATIO_TOLERANCE = 1e-9

_NOTE_NAME = re.compile(r"^([A-G]#?)(-?\d+)$")


class NoteIndex(BaseModel):
    """Нота равномерно темперированной сетки (номер MIDI, A4 = 69)"""

    midi_number: int = Field(..., ge=0, le=127)

    model_config = ConfigDict(frozen=True)

    @property
    def name(self) -> str:
        return f"{PITCH_CLASSES[self.midi_number % 12]}{self.midi_number // 12 - 1}"

    @classmethod
    def from_name(cls, name: str) -> "NoteIndex":
        """
        Разбор имени ноты вида "B1", "F#6".

        Args:
            name: Имя ноты (только диезы)

        Returns:
            NoteIndex

        Raises:
            ValueError: Если имя не распознано
        """
        match = _NOTE_NAME.match(name.strip())
        if not match or match.group(1) not in PITCH_CLASSES:
            raise ValueError(f"Не удалось разобрать имя ноты '{name}'")
        pitch_class = PITCH_CLASSES.index(match.group(1))
        octave = int(match.group(2))
        return cls(midi_number=12 * octave + pitch_class + 12)

    def shifted(self, semitones: int) -> "NoteIndex":
        return NoteIndex(midi_number=self.midi_number + semitones)


def _nearest_scale_ratio(ratio: float) -> float | None:
    for allowed in SCALE_RATIOS:
        if abs(ratio - allowed) <= RATIO_TOLERANCE:
            return allowed
    return None


class ScaleSpec(BaseModel):
    """
    Арохана и аварохана раги как последовательности отношений к Sa.

    Верхняя Sa (2.0) хранится явно: последней в арохане и первой в аварохане.
    Для "закрученных" гамм проверка монотонности отключается флагом twisted.
    """

    name: str
    arohanam: tuple[float, ...]
    avarohanam: tuple[float, ...]
    arohanam_swaras: tuple[str, ...] = ()
    avarohanam_swaras: tuple[str, ...] = ()
    twisted: bool = False

    model_config = ConfigDict(
        extra="forbid",
        frozen=True,
    )

    @field_validator("name")
    @classmethod
    def validate_name(cls, v: str) -> str:
        return validate_non_empty(v)

    @model_validator(mode="after")
    def validate_scale(self) -> "ScaleSpec":
        for direction, ratios in (("arohanam", self.arohanam), ("avarohanam", self.avarohanam)):
            if not 4 <= len(ratios) <= 8:
                raise ScaleValidationError(
                    self.name, f"{direction} has {len(ratios)} swaras, expected 4..8"
                )
            for ratio in ratios:
                if _nearest_scale_ratio(ratio) is None:
                    raise ScaleValidationError(
                        self.name, f"{direction} ratio {ratio} is not a 12-tone swara ratio"
                    )

        if abs(self.arohanam[-1] - 2.0) > RATIO_TOLERANCE:
            raise ScaleValidationError(self.name, "arohanam must end on upper Sa (2.0)")
        if abs(self.avarohanam[0] - 2.0) > RATIO_TOLERANCE:
            raise ScaleValidationError(self.name, "avarohanam must start on upper Sa (2.0)")

        if not self.twisted:
            if any(b <= a for a, b in zip(self.arohanam, self.arohanam[1:])):
                raise ScaleValidationError(self.name, "arohanam ratios must strictly increase")
            if any(b >= a for a, b in zip(self.avarohanam, self.avarohanam[1:])):
                raise ScaleValidationError(self.name, "avarohanam ratios must strictly decrease")
        return self

    @property
    def ratios(self) -> tuple[float, ...]:
        """Порядок исполнения: арохана, затем аварохана"""
        return self.arohanam + self.avarohanam


class RagaLabel(BaseModel):
    """Метка класса: плотный id и имя раги"""

    id: int = Field(..., ge=0)
    name: str

    model_config = ConfigDict(frozen=True)


class LabelMap(BaseModel):
    """Взаимно однозначное отображение id <-> имя раги"""

    labels: tuple[RagaLabel, ...]

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def validate_dense(self) -> "LabelMap":
        ids = [label.id for label in self.labels]
        if ids != list(range(len(ids))):
            raise ValueError("id меток должны быть плотными: 0..n-1 по порядку")
        names = [label.name for label in self.labels]
        if len(set(names)) != len(names):
            raise ValueError("Имена раг в карте меток должны быть уникальны")
        return self

    @classmethod
    def from_names(cls, names) -> "LabelMap":
        """Карта из уникальных имён, отсортированных по алфавиту"""
        unique = sorted(set(names))
        return cls(labels=tuple(RagaLabel(id=i, name=n) for i, n in enumerate(unique)))

    @property
    def names(self) -> list[str]:
        return [label.name for label in self.labels]

    def id_of(self, name: str) -> int:
        for label in self.labels:
            if label.name == name:
                return label.id
        raise KeyError(name)

    def name_of(self, label_id: int) -> str:
        return self.labels[label_id].name

    def __len__(self) -> int:
        return len(self.labels)
