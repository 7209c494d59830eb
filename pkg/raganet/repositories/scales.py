from pathlib import Path

from raganet.core.exceptions import ScaleValidationError
from raganet.repositories.base import FileRepository
from raganet.schemas.notes import ScaleSpec
from raganet.services.notes_service import build_scale

COMMENT_PREFIX = "#"


def parse_scale_line(line: str) -> ScaleSpec:
    """
    Разбор строки вида `name,S R2 G3 ... S';S' ... S[,twisted]`.

    Raises:
        ScaleValidationError: Нарушен формат строки или правила гаммы
        UnknownSwaraError: Неизвестная свара
    """
    parts = [part.strip() for part in line.split(",")]
    if len(parts) not in (2, 3) or not parts[0]:
        raise ScaleValidationError(parts[0] if parts else "", "expected 'name,arohanam;avarohanam'")
    name, body = parts[0], parts[1]
    twisted = len(parts) == 3 and parts[2].lower() == "twisted"
    if len(parts) == 3 and not twisted:
        raise ScaleValidationError(name, f"unknown flag '{parts[2]}'")
    if body.count(";") != 1:
        raise ScaleValidationError(name, "arohanam and avarohanam must be separated by ';'")
    arohanam, avarohanam = body.split(";")
    return build_scale(name, arohanam, avarohanam, twisted=twisted)


class ScaleRepository(FileRepository):
    """Файлы описаний гамм: одна рага на строку, '#' - комментарий"""

    kind = "scales file"

    def load(self, relative: str | Path) -> list[ScaleSpec]:
        scales = []
        for raw in self.read_text(relative).splitlines():
            line = raw.strip()
            if not line or line.startswith(COMMENT_PREFIX):
                continue
            scales.append(parse_scale_line(line))

        names = [scale.name for scale in scales]
        duplicates = sorted({name for name in names if names.count(name) > 1})
        if duplicates:
            raise ScaleValidationError(duplicates[0], "duplicate raga name")
        return scales

    def save(self, scales: list[ScaleSpec], relative: str | Path) -> Path:
        lines = []
        for scale in scales:
            line = f"{scale.name},{' '.join(scale.arohanam_swaras)};{' '.join(scale.avarohanam_swaras)}"
            if scale.twisted:
                line += ",twisted"
            lines.append(line)
        return self.write_text(relative, "\n".join(lines) + "\n")
