"""
Тесты извлечения признаков для манифеста (FeaturizeService).
"""

from pathlib import Path

import pytest

from raganet.core.exceptions import InputFileNotFoundError, ManifestError, SegmentationMismatchError
from raganet.repositories.features import FeatureRepository
from raganet.repositories.manifests import ManifestRepository
from raganet.schemas.audio import SegmentationConfig
from raganet.schemas.features import FeatureConfig
from raganet.schemas.training import ManifestRow
from raganet.services.audio_service import save_clip
from raganet.services.dataset_service import FeaturizeService, expected_segments, load_dataset
from raganet.services.feature_service import FeatureExtractor
from tests.shared.fixtures.audio_fixtures import make_sine

SEGMENTATION = SegmentationConfig(segment_seconds=1.0)


@pytest.fixture
def clip_manifest(workdir: Path) -> Path:
    """Два клипа Todi (3 с и 1.5 с) и один Kalyani (2 с)"""
    clips = [
        ("Todi", "todi_a", 220.0, 3.0),
        ("Todi", "todi_b", 330.0, 1.5),
        ("Kalyani", "kalyani_a", 262.0, 2.0),
    ]
    rows = []
    for raga, name, freq, seconds in clips:
        relative = f"wav/{raga.lower()}/{name}.wav"
        save_clip(make_sine(freq, seconds, clip_id=name), workdir / "data" / relative)
        rows.append(ManifestRow(path=relative, raga=raga, recording_id=name, tonic_hz=freq))
    ManifestRepository(workdir / "data").save(rows, "manifest.csv")
    return workdir / "data" / "manifest.csv"


def featurize_service(
    workdir: Path,
    config: FeatureConfig | None = None,
    segmentation: SegmentationConfig = SEGMENTATION,
) -> FeaturizeService:
    return FeaturizeService(
        FeatureExtractor(config or FeatureConfig()),
        segmentation,
        workdir / "features",
        workers=2,
    )


@pytest.mark.integration
class TestFeaturizeService:
    """Тесты для FeaturizeService.run"""

    def test_rows_per_segment(self, workdir, clip_manifest):
        rows = featurize_service(workdir).run(clip_manifest)

        # 3 с -> 2.4 с после обрезки -> 3 сегмента; 1.5 с -> 2; 2 с -> 2
        assert [(row.recording_id, row.segment) for row in rows] == [
            ("todi_a", 0),
            ("todi_a", 1),
            ("todi_a", 2),
            ("todi_b", 0),
            ("todi_b", 1),
            ("kalyani_a", 0),
            ("kalyani_a", 1),
        ]
        assert rows[0].path == "../data/wav/todi/todi_a.wav"
        assert rows[0].feature_path == "todi/todi_a_000.rgfb"
        assert rows[0].tonic_hz == 220.0

    def test_writes_loadable_manifest(self, workdir, clip_manifest):
        featurize_service(workdir).run(clip_manifest)

        rows = ManifestRepository(workdir / "features").load("manifest.csv")
        dataset = load_dataset(rows, FeatureRepository(workdir / "features"), FeatureConfig().config_hash())

        assert len(dataset) == 7
        assert dataset.x.shape == (7, 40, 56)
        assert dataset.labels.names == ["Kalyani", "Todi"]

    def test_up_to_date_files_are_skipped(self, workdir, clip_manifest):
        service = featurize_service(workdir)
        service.run(clip_manifest)
        files = sorted((workdir / "features").rglob("*.rgfb"))
        stamps = [path.stat().st_mtime_ns for path in files]

        second = service.run(clip_manifest)

        assert len(second) == 7
        assert [path.stat().st_mtime_ns for path in files] == stamps

    def test_changed_config_recomputes(self, workdir, clip_manifest):
        featurize_service(workdir).run(clip_manifest)

        config = FeatureConfig(epsilon=1e-9)
        featurize_service(workdir, config).run(clip_manifest)

        repository = FeatureRepository(workdir / "features")
        assert repository.stored_hash("todi/todi_a_000.rgfb") == config.config_hash()

    def test_changed_segment_length_recomputes(self, workdir, clip_manifest):
        featurize_service(workdir).run(clip_manifest)

        # 0.9 с дают то же число сегментов на клип, что и 1.0 с
        shorter = SegmentationConfig(segment_seconds=0.9)
        rows = featurize_service(workdir, segmentation=shorter).run(clip_manifest)

        assert len(rows) == 7
        repository = FeatureRepository(workdir / "features")
        frames = FeatureConfig().stft.num_frames(shorter.segment_samples)
        assert frames != FeatureConfig().stft.num_frames(SEGMENTATION.segment_samples)
        assert repository.load("todi/todi_a_000.rgfb").values.shape == (frames, 56)
        assert repository.stored_segmentation() == shorter

    def test_segmentation_mismatch_is_reported(self, workdir, clip_manifest):
        featurize_service(workdir).run(clip_manifest)
        repository = FeatureRepository(workdir / "features")

        repository.check_segmentation(SEGMENTATION)
        with pytest.raises(SegmentationMismatchError) as exc_info:
            repository.check_segmentation(SegmentationConfig(segment_seconds=0.9))

        assert exc_info.value.details["actual"]["segment_seconds"] == 1.0
        assert exc_info.value.details["expected"]["segment_seconds"] == 0.9

    def test_repeated_clip_name_within_raga(self, workdir, clip_manifest):
        rows = ManifestRepository(clip_manifest.parent).load("manifest.csv")
        duplicate = rows[0].model_copy(update={"recording_id": "other"})
        ManifestRepository(clip_manifest.parent).save(rows + [duplicate], "manifest.csv")

        with pytest.raises(ManifestError) as exc_info:
            featurize_service(workdir).run(clip_manifest)

        assert exc_info.value.details["row"] == 5

    def test_missing_manifest(self, workdir):
        with pytest.raises(InputFileNotFoundError):
            featurize_service(workdir).run(workdir / "data" / "manifest.csv")


@pytest.mark.unit
class TestExpectedSegments:
    """Тесты для expected_segments"""

    @pytest.mark.parametrize("seconds,count", [(1.0, 1), (1.25, 1), (1.3, 2), (3.0, 3), (10.0, 8)])
    def test_matches_segmentation_law(self, seconds, count):
        clip = make_sine(100.0, seconds)

        assert expected_segments(clip, SEGMENTATION) == count

    def test_resampled_length(self):
        clip = make_sine(100.0, 3.0, sample_rate=44100)

        assert expected_segments(clip, SEGMENTATION) == 3

    def test_short_clip_is_padded(self):
        clip = make_sine(100.0, 0.2)

        assert expected_segments(clip, SEGMENTATION) == 1
