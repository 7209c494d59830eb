"""
Равномерно темперированная сетка нот, таблица свар и гаммы мелакарт.

Чистые функции и неизменяемые таблицы - безопасно разделять между потоками.
"""

import math

from raganet.core.exceptions import NoteRangeError, UnknownSwaraError
from raganet.schemas.notes import NoteIndex, ScaleSpec

A4_MIDI = 69
DEFAULT_TUNING_A4 = 440.0

# Полутона от Sa; энгармонические пары (R2=G1, R3=G2, D2=N1, D3=N2) совпадают
SWARA_SEMITONES: dict[str, int] = {
    "S": 0,
    "R1": 1,
    "R2": 2,
    "G1": 2,
    "R3": 3,
    "G2": 3,
    "G3": 4,
    "M1": 5,
    "M2": 6,
    "P": 7,
    "D1": 8,
    "D2": 9,
    "N1": 9,
    "D3": 10,
    "N2": 10,
    "N3": 11,
}
UPPER_SA_NAMES = ("S'", "Ṡ")

# Пары (R, G) и (D, N) в порядке перебора внутри чакры
_LOWER_PAIRS = (("R1", "G1"), ("R1", "G2"), ("R1", "G3"), ("R2", "G2"), ("R2", "G3"), ("R3", "G3"))
_UPPER_PAIRS = (("D1", "N1"), ("D1", "N2"), ("D1", "N3"), ("D2", "N2"), ("D2", "N3"), ("D3", "N3"))

MELAKARTA_NAMES = (
    "Kanakangi", "Ratnangi", "Ganamurti", "Vanaspati", "Manavati", "Tanarupi",
    "Senavati", "Hanumatodi", "Dhenuka", "Natakapriya", "Kokilapriya", "Rupavati",
    "Gayakapriya", "Vakulabharanam", "Mayamalavagowla", "Chakravakam", "Suryakantam", "Hatakambari",
    "Jhankaradhvani", "Natabhairavi", "Keeravani", "Kharaharapriya", "Gourimanohari", "Varunapriya",
    "Mararanjani", "Charukesi", "Sarasangi", "Harikambhoji", "Dheerasankarabharanam", "Naganandini",
    "Yagapriya", "Ragavardhini", "Gangeyabhushani", "Vagadheeswari", "Shulini", "Chalanata",
    "Salagam", "Jalarnavam", "Jhalavarali", "Navaneetam", "Pavani", "Raghupriya",
    "Gavambhodi", "Bhavapriya", "Shubhapantuvarali", "Shadvidamargini", "Suvarnangi", "Divyamani",
    "Dhavalambari", "Namanarayani", "Kamavardhini", "Ramapriya", "Gamanashrama", "Vishwambari",
    "Shamalangi", "Shanmukhapriya", "Simhendramadhyamam", "Hemavati", "Dharmavati", "Neetimati",
    "Kantamani", "Rishabhapriya", "Latangi", "Vachaspati", "Mechakalyani", "Chitrambari",
    "Sucharitra", "Jyotiswarupini", "Dhatuvardhani", "Nasikabhushani", "Kosalam", "Rasikapriya",
)


def semitone_ratio(semitones: int) -> float:
    """Отношение частот для целого числа полутонов; октавы точны"""
    octave, pitch_class = divmod(semitones, 12)
    return math.ldexp(2.0 ** (pitch_class / 12), octave)


def note_frequency(note: NoteIndex, tuning_a4: float = DEFAULT_TUNING_A4) -> float:
    """
    Частота ноты в 12-ТЕТ.

    Октава вынесена в точное умножение на степень двойки, поэтому
    note_frequency(n + 12) == 2 * note_frequency(n) без погрешности.

    Args:
        note: Нота сетки
        tuning_a4: Частота A4 в Гц

    Returns:
        Частота в Гц
    """
    octave, pitch_class = divmod(note.midi_number - A4_MIDI, 12)
    return math.ldexp(tuning_a4 * 2.0 ** (pitch_class / 12), octave)


def midi_frequency(midi_number: int, tuning_a4: float = DEFAULT_TUNING_A4) -> float:
    """Частота по номеру MIDI (без построения NoteIndex)"""
    octave, pitch_class = divmod(midi_number - A4_MIDI, 12)
    return math.ldexp(tuning_a4 * 2.0 ** (pitch_class / 12), octave)


def swara_ratio(swara: str) -> float:
    """
    Отношение частоты свары к Sa.

    Args:
        swara: Имя свары ("S", "R2", "P", ...); "S'" - верхняя Sa

    Returns:
        Отношение 2^(k/12)

    Raises:
        UnknownSwaraError: Неизвестное имя
    """
    name = swara.strip()
    if name in UPPER_SA_NAMES:
        return 2.0
    if name not in SWARA_SEMITONES:
        raise UnknownSwaraError(swara)
    return 2.0 ** (SWARA_SEMITONES[name] / 12)


def nearest_note(freq: float, tuning_a4: float = DEFAULT_TUNING_A4) -> tuple[NoteIndex, float]:
    """
    Ближайшая нота и отклонение в центах.

    Отклонение лежит в (-50, +50]: ровно посередине выбирается нижняя нота.

    Args:
        freq: Частота в Гц (> 0)
        tuning_a4: Частота A4 в Гц

    Returns:
        (нота, отклонение в центах)

    Raises:
        ValueError: Если freq <= 0
        NoteRangeError: Если ближайшая нота вне MIDI 0..127
    """
    if not freq > 0:
        raise ValueError("Частота должна быть больше нуля")
    # округление гасит шум log2 вблизи границы "ровно посередине"
    position = round(A4_MIDI + 12.0 * math.log2(freq / tuning_a4), 9)
    midi = math.ceil(position - 0.5)
    if not 0 <= midi <= 127:
        raise NoteRangeError(position)
    cents = 100.0 * (position - midi)
    return NoteIndex(midi_number=midi), cents


def parse_swaras(text: str) -> tuple[list[str], list[float]]:
    """
    Разбор последовательности свар, разделённых пробелами.

    Args:
        text: Например "S R2 G3 P D2 S'"

    Returns:
        (имена свар, отношения к Sa)

    Raises:
        UnknownSwaraError: Неизвестное имя свары
    """
    names = text.split()
    return names, [swara_ratio(name) for name in names]


def build_scale(name: str, arohanam: str, avarohanam: str, twisted: bool = False) -> ScaleSpec:
    """
    ScaleSpec из текстовых последовательностей свар.

    Raises:
        UnknownSwaraError: Неизвестное имя свары
        ScaleValidationError: Нарушены правила гаммы
    """
    aro_names, aro = parse_swaras(arohanam)
    ava_names, ava = parse_swaras(avarohanam)
    return ScaleSpec(
        name=name,
        arohanam=tuple(aro),
        avarohanam=tuple(ava),
        arohanam_swaras=tuple(aro_names),
        avarohanam_swaras=tuple(ava_names),
        twisted=twisted,
    )


def melakarta_swaras(number: int) -> list[str]:
    """
    Свары мелакарты по номеру (1..72), от S до N.

    Args:
        number: Номер мелакарты

    Returns:
        Семь имён свар

    Raises:
        ValueError: Номер вне 1..72
    """
    if not 1 <= number <= 72:
        raise ValueError("Номер мелакарты должен лежать в 1..72")
    index = number - 1
    madhyamam = "M1" if index < 36 else "M2"
    chakra, position = divmod(index % 36, 6)
    r, g = _LOWER_PAIRS[chakra]
    d, n = _UPPER_PAIRS[position]
    return ["S", r, g, madhyamam, "P", d, n]


def melakarta_scale(number: int) -> ScaleSpec:
    """Симметричная гамма мелакарты: 8 свар вверх и 8 вниз"""
    swaras = melakarta_swaras(number)
    ascending = " ".join(swaras + ["S'"])
    descending = " ".join(["S'"] + swaras[::-1])
    return build_scale(MELAKARTA_NAMES[number - 1], ascending, descending)
