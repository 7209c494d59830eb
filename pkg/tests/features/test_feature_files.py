"""
Тесты формата файлов признаков и FeatureRepository.
"""

import os
import struct

import numpy as np
import pytest

from raganet.core.exceptions import ConfigHashMismatchError, FeatureFileError, InputFileNotFoundError
from raganet.repositories.features import FeatureRepository
from raganet.schemas.features import FeatureMatrix
from raganet.services.feature_service import FEATURE_HEADER, read_features, write_features

HASH = "0123456789abcdef"


def random_matrix(rng: np.random.Generator) -> FeatureMatrix:
    frames, bins = rng.integers(1, 40), rng.integers(1, 60)
    return FeatureMatrix(values=rng.normal(-5.0, 3.0, (frames, bins)), config_hash=HASH)


@pytest.mark.unit
class TestFeatureFormat:
    """Тесты для write_features / read_features"""

    def test_header_layout(self):
        fm = FeatureMatrix(values=np.zeros((3, 2)), config_hash=HASH)

        data = write_features(fm)

        magic, version, frames, bins, digest = FEATURE_HEADER.unpack_from(data, 0)
        assert (magic, version, frames, bins) == (b"RGFB", 1, 3, 2)
        assert digest.hex() == HASH
        assert len(data) == FEATURE_HEADER.size + 3 * 2 * 4

    def test_round_trip_is_bit_exact(self, rng):
        """100 случайных матриц: запись и чтение без потерь"""
        for _ in range(100):
            fm = random_matrix(rng)

            restored = read_features(write_features(fm))

            assert restored.values.tobytes() == fm.values.tobytes()
            assert restored.config_hash == fm.config_hash

    def test_bad_magic(self):
        data = bytearray(write_features(FeatureMatrix(values=np.zeros((1, 1)), config_hash=HASH)))
        data[:4] = b"XXXX"

        with pytest.raises(FeatureFileError):
            read_features(bytes(data))

    def test_bad_version(self):
        data = bytearray(write_features(FeatureMatrix(values=np.zeros((1, 1)), config_hash=HASH)))
        struct.pack_into("<I", data, 4, 9)

        with pytest.raises(FeatureFileError) as exc_info:
            read_features(bytes(data))

        assert "version" in exc_info.value.details["reason"]

    def test_truncated_payload(self):
        data = write_features(FeatureMatrix(values=np.zeros((4, 4)), config_hash=HASH))

        with pytest.raises(FeatureFileError):
            read_features(data[:-1])

    def test_non_finite_payload(self):
        data = FEATURE_HEADER.pack(b"RGFB", 1, 1, 1, bytes.fromhex(HASH)) + np.array([np.nan], "<f4").tobytes()

        with pytest.raises(FeatureFileError):
            read_features(data)


@pytest.mark.integration
class TestFeatureRepository:
    """Тесты для FeatureRepository"""

    def test_save_and_load(self, tmp_path, rng):
        repo = FeatureRepository(tmp_path)
        fm = random_matrix(rng)
        relative = FeatureRepository.relative_path("todi", "todi_001", 2)

        repo.save(fm, relative)
        loaded = repo.load(relative, expected_hash=HASH)

        assert relative == "todi/todi_001_002.rgfb"
        assert loaded.values.tobytes() == fm.values.tobytes()
        assert loaded.clip_id == "todi_001_002"

    def test_hash_mismatch(self, tmp_path):
        repo = FeatureRepository(tmp_path)
        repo.save(FeatureMatrix(values=np.zeros((1, 1)), config_hash=HASH), "a.rgfb")

        with pytest.raises(ConfigHashMismatchError) as exc_info:
            repo.load("a.rgfb", expected_hash="ffffffffffffffff")

        assert exc_info.value.details["actual"] == HASH

    def test_missing_file(self, tmp_path):
        with pytest.raises(InputFileNotFoundError):
            FeatureRepository(tmp_path).load("missing.rgfb")

    def test_up_to_date(self, tmp_path):
        """Актуален: тот же хэш и файл не старше источника"""
        repo = FeatureRepository(tmp_path)
        source = tmp_path / "clip.wav"
        source.write_bytes(b"")
        os.utime(source, (1_000_000, 1_000_000))
        repo.save(FeatureMatrix(values=np.zeros((1, 1)), config_hash=HASH), "clip.rgfb")

        assert repo.is_up_to_date("clip.rgfb", source, HASH)
        assert not repo.is_up_to_date("clip.rgfb", source, "ffffffffffffffff")
        assert not repo.is_up_to_date("other.rgfb", source, HASH)

        os.utime(source, None)
        os.utime(tmp_path / "clip.rgfb", (1_000_000, 1_000_000))
        assert not repo.is_up_to_date("clip.rgfb", source, HASH)
