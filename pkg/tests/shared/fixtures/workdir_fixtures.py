from pathlib import Path

import pytest

from raganet.services.notes_service import build_scale

# гаммы, попарно различающиеся хотя бы одной сварой
TEST_SCALES = {
    "Mayamalavagowla": ("S R1 G3 M1 P D1 N3 S'", "S' N3 D1 P M1 G3 R1 S"),
    "Kharaharapriya": ("S R2 G2 M1 P D2 N2 S'", "S' N2 D2 P M1 G2 R2 S"),
}


@pytest.fixture
def workdir(tmp_path: Path) -> Path:
    """Пустая рабочая директория запуска"""
    return tmp_path


@pytest.fixture
def two_scales():
    return [build_scale(name, aro, ava) for name, (aro, ava) in TEST_SCALES.items()]


@pytest.fixture
def scales_file(workdir: Path) -> Path:
    """Файл гамм из двух раг в рабочей директории"""
    path = workdir / "scales.txt"
    lines = ["# name,arohanam;avarohanam"]
    lines += [f"{name},{aro};{ava}" for name, (aro, ava) in TEST_SCALES.items()]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
