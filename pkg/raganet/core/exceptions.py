"""
Доменные исключения пакета.

Все ошибки предметной области наследуются от DomainException.
В CLI-слое они маппятся на коды выхода через общий обработчик.
"""

from typing import Any


# Коды выхода процесса
EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4


# BASE EXCEPTIONS


class DomainException(Exception):
    """
    Базовое исключение для всех доменных ошибок.

    Attributes:
        message: Сообщение об ошибке
        exit_code: Код выхода CLI (по умолчанию EXIT_DATA)
        details: Дополнительные данные об ошибке
    """

    def __init__(
        self,
        message: str,
        exit_code: int = EXIT_DATA,
        details: dict[str, Any] | None = None,
    ):
        self.message = message
        self.exit_code = exit_code
        self.details = details or {}
        super().__init__(self.message)


class UsageError(DomainException):
    """Некорректные аргументы или конфигурация запуска (2)"""

    def __init__(self, message: str, details: dict[str, Any] | None = None):
        super().__init__(message, exit_code=EXIT_USAGE, details=details)


class DataError(DomainException):
    """Некорректные или отсутствующие данные (3)"""

    def __init__(self, message: str, details: dict[str, Any] | None = None):
        super().__init__(message, exit_code=EXIT_DATA, details=details)


class NumericError(DomainException):
    """Численная ошибка при вычислениях (4)"""

    def __init__(self, message: str, details: dict[str, Any] | None = None):
        super().__init__(message, exit_code=EXIT_NUMERIC, details=details)


# ============================================================================
# AUDIO DOMAIN EXCEPTIONS
# ============================================================================


class WavFormatError(DataError):
    """Повреждённый или не-RIFF/WAVE контейнер"""

    def __init__(self, reason: str):
        super().__init__(f"Malformed WAV data: {reason}", details={"reason": reason})


class UnsupportedEncodingError(DataError):
    """Кодировка WAV не поддерживается"""

    def __init__(self, encoding: str):
        super().__init__(
            f"Unsupported WAV encoding: {encoding}",
            details={"encoding": encoding},
        )


class DegenerateClipError(DataError):
    """После обрезки клип слишком короткий"""

    def __init__(self, length: int, minimum: int):
        super().__init__(
            f"Clip has {length} samples after trimming, at least {minimum} required",
            details={"length": length, "minimum": minimum},
        )


class SampleRateMismatchError(DataError):
    """Частота дискретизации клипа не совпадает с конфигурацией"""

    def __init__(self, actual: int, expected: int):
        super().__init__(
            f"Clip sample rate {actual} Hz does not match configured {expected} Hz",
            details={"actual": actual, "expected": expected},
        )


class ClipTooShortError(DataError):
    """Клип короче одного кадра STFT"""

    def __init__(self, length: int, frame_size: int):
        super().__init__(
            f"Clip of {length} samples is shorter than one frame of {frame_size}",
            details={"length": length, "frame_size": frame_size},
        )


# ============================================================================
# NOTES DOMAIN EXCEPTIONS
# ============================================================================


class UnknownSwaraError(DataError):
    """Неизвестное имя свары"""

    def __init__(self, swara: str):
        super().__init__(f"Unknown swara name '{swara}'", details={"swara": swara})


class ScaleValidationError(DataError):
    """Нарушены правила построения гаммы раги"""

    def __init__(self, name: str, reason: str):
        super().__init__(
            f"Invalid scale '{name}': {reason}",
            details={"scale": name, "reason": reason},
        )


class NoteRangeError(DataError):
    """Нота вне диапазона MIDI 0..127"""

    def __init__(self, value: float):
        super().__init__(
            f"Note {value} is outside the MIDI range 0..127",
            details={"value": value},
        )


# ============================================================================
# FEATURE DOMAIN EXCEPTIONS
# ============================================================================


class FilterBankResolutionError(DataError):
    """Носитель фильтра не содержит ни одного бина спектра"""

    def __init__(self, bin_index: int, note: str, fft_size: int):
        super().__init__(
            f"Filter bin {bin_index} ({note}) contains no spectrum bin at FFT size {fft_size}",
            details={"bin": bin_index, "note": note, "fft_size": fft_size},
        )


class FilterBankRangeError(DataError):
    """Частоты фильтров выходят за частоту Найквиста"""

    def __init__(self, frequency: float, nyquist: float):
        super().__init__(
            f"Filter frequency {frequency:.2f} Hz is not below Nyquist {nyquist:.2f} Hz",
            details={"frequency": frequency, "nyquist": nyquist},
        )


class FeatureFileError(DataError):
    """Файл признаков повреждён или имеет неверный формат"""

    def __init__(self, reason: str, path: str | None = None):
        details = {"reason": reason}
        if path:
            details["path"] = path
        super().__init__(f"Cannot read feature file: {reason}", details=details)


class ConfigHashMismatchError(DataError):
    """Признаки посчитаны с другой конфигурацией"""

    def __init__(self, expected: str, actual: str, path: str | None = None):
        details = {"expected": expected, "actual": actual}
        if path:
            details["path"] = path
        super().__init__(
            f"Feature config hash {actual} does not match expected {expected}",
            details=details,
        )


class SegmentationMismatchError(DataError):
    """Признаки нарезаны с другими параметрами сегментации"""

    def __init__(self, expected: dict, actual: dict, path: str | None = None):
        details = {"expected": expected, "actual": actual}
        if path:
            details["path"] = path
        super().__init__("Features were segmented with a different segmentation config", details=details)


# ============================================================================
# SYNTH DOMAIN EXCEPTIONS
# ============================================================================


class PitchRangeError(DataError):
    """Высота синтезируемой ноты вне диапазона банка фильтров"""

    def __init__(self, frequency: float, low: float, high: float):
        super().__init__(
            f"Pitch {frequency:.2f} Hz is outside the filter range [{low:.2f}, {high:.2f}] Hz",
            details={"frequency": frequency, "low": low, "high": high},
        )


# ============================================================================
# MODEL DOMAIN EXCEPTIONS
# ============================================================================


class DimensionError(DataError):
    """Несовпадение размерностей тензоров"""

    def __init__(self, message: str, expected: Any = None, actual: Any = None):
        details = {}
        if expected is not None:
            details["expected"] = str(expected)
        if actual is not None:
            details["actual"] = str(actual)
        super().__init__(message, details=details)


class NonFiniteError(NumericError):
    """NaN или Inf в промежуточном результате"""

    def __init__(self, layer: str, epoch: int | None = None):
        details: dict[str, Any] = {"layer": layer}
        message = f"Non-finite values produced by layer '{layer}'"
        if epoch is not None:
            details["epoch"] = epoch
            message += f" at epoch {epoch}"
        super().__init__(message, details=details)


class ModelStateError(DomainException):
    """Операция вызвана в неверном состоянии модели"""

    def __init__(self, message: str):
        super().__init__(message, exit_code=EXIT_UNEXPECTED)


class CheckpointError(DataError):
    """Файл чекпойнта повреждён или несовместим"""

    def __init__(self, reason: str, path: str | None = None):
        details = {"reason": reason}
        if path:
            details["path"] = path
        super().__init__(f"Cannot load checkpoint: {reason}", details=details)


# ============================================================================
# TRAINING DOMAIN EXCEPTIONS
# ============================================================================


class ManifestError(DataError):
    """Ошибка в манифесте датасета"""

    def __init__(self, reason: str, row: int | None = None, path: str | None = None):
        details: dict[str, Any] = {"reason": reason}
        if row is not None:
            details["row"] = row
        if path:
            details["path"] = path
        super().__init__(f"Invalid manifest: {reason}", details=details)


class SplitError(DataError):
    """Невозможно разбить датасет по записям"""

    def __init__(self, raga: str, recordings: int):
        super().__init__(
            f"Raga '{raga}' has {recordings} recording(s); recording-level split needs "
            f"at least 2 per class, use split_mode='clip' to split by clip instead",
            details={"raga": raga, "recordings": recordings},
        )


class TrainConfigError(UsageError):
    """Конфигурация обучения непригодна для данных"""

    def __init__(self, reason: str):
        super().__init__(f"Invalid training setup: {reason}", details={"reason": reason})


class EmptyDatasetError(DataError):
    """Пустой датасет"""

    def __init__(self, name: str = "dataset"):
        super().__init__(f"The {name} is empty", details={"dataset": name})


class InputFileNotFoundError(UsageError):
    """Входной файл, указанный пользователем, не найден"""

    def __init__(self, path: str, kind: str = "input file"):
        super().__init__(
            f"The {kind} '{path}' does not exist",
            details={"path": path, "kind": kind},
        )
