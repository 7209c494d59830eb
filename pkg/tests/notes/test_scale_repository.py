"""
Тесты файлов гамм.
"""

import pytest

from raganet.core.exceptions import InputFileNotFoundError, ScaleValidationError, UnknownSwaraError
from raganet.repositories.scales import ScaleRepository, parse_scale_line


@pytest.mark.unit
class TestParseScaleLine:
    """Тесты для parse_scale_line"""

    def test_straight_scale(self):
        scale = parse_scale_line("Hamsadhwani,S R2 G3 P N3 S';S' N3 P G3 R2 S")

        assert scale.name == "Hamsadhwani"
        assert scale.arohanam_swaras == ("S", "R2", "G3", "P", "N3", "S'")
        assert not scale.twisted

    def test_twisted_flag(self):
        scale = parse_scale_line("Twisted,S G3 R2 M1 P N3 S';S' N3 P M1 G3 R2 S,twisted")

        assert scale.twisted

    @pytest.mark.parametrize(
        "line",
        [
            "OnlyName",
            "NoSeparator,S R2 G3 P S'",
            "BadFlag,S R2 G3 P S';S' P G3 R2 S,sideways",
        ],
    )
    def test_bad_format(self, line):
        with pytest.raises(ScaleValidationError):
            parse_scale_line(line)

    def test_unknown_swara(self):
        with pytest.raises(UnknownSwaraError):
            parse_scale_line("Odd,S R4 G3 P S';S' P G3 R2 S")


@pytest.mark.integration
class TestScaleRepository:
    """Тесты для ScaleRepository"""

    def test_load_skips_comments(self, workdir, scales_file):
        scales = ScaleRepository(workdir).load(scales_file.name)

        assert [s.name for s in scales] == ["Mayamalavagowla", "Kharaharapriya"]

    def test_save_and_load(self, workdir, two_scales):
        repo = ScaleRepository(workdir)

        repo.save(two_scales, "copy.txt")

        assert repo.load("copy.txt") == two_scales

    def test_duplicate_names(self, workdir):
        (workdir / "dup.txt").write_text(
            "A,S R2 G3 P S';S' P G3 R2 S\nA,S R1 G3 P S';S' P G3 R1 S\n", encoding="utf-8"
        )

        with pytest.raises(ScaleValidationError) as exc_info:
            ScaleRepository(workdir).load("dup.txt")

        assert exc_info.value.details["scale"] == "A"

    def test_missing_file(self, workdir):
        with pytest.raises(InputFileNotFoundError):
            ScaleRepository(workdir).load("missing.txt")
