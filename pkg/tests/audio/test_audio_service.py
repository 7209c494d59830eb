"""
Тесты чтения, записи и передискретизации WAV.
"""

import struct

import numpy as np
import pytest

from raganet.core.exceptions import InputFileNotFoundError, UnsupportedEncodingError, WavFormatError
from raganet.schemas.audio import AudioClip
from raganet.services.audio_service import decode_wav, encode_wav, load_clip, resample, save_clip
from tests.shared.fixtures.audio_fixtures import make_sine, wav_bytes


@pytest.mark.unit
class TestDecodeWav:
    """Тесты для decode_wav"""

    def test_pcm16_mono(self):
        """PCM16 моно: N отсчётов, частота сохраняется"""
        payload = np.arange(-50, 50, dtype="<i2").tobytes()

        clip = decode_wav(wav_bytes(payload))

        assert clip.num_samples == 100
        assert clip.sample_rate == 22050

    def test_min_pcm16_value_is_minus_one(self):
        """Отсчёт -32768 даёт ровно -1.0"""
        payload = struct.pack("<4h", -32768, 0, 16384, 32767)

        clip = decode_wav(wav_bytes(payload))

        assert clip.samples[0] == -1.0
        assert clip.samples[1] == 0.0
        assert clip.samples[2] == 0.5
        assert clip.samples[3] == pytest.approx(32767 / 32768)

    def test_symmetric_stereo_averages_to_zero(self):
        """Стерео L=+0.5, R=-0.5 сводится в нулевой моно-клип"""
        frames = np.tile(np.array([16384, -16384], dtype="<i2"), 50)

        clip = decode_wav(wav_bytes(frames.tobytes(), channels=2))

        assert clip.num_samples == 50
        assert np.all(clip.samples == 0.0)

    def test_float32(self):
        """FLOAT32 читается без масштабирования"""
        values = np.array([0.25, -0.75, 1.0], dtype="<f4")

        clip = decode_wav(wav_bytes(values.tobytes(), bits=32, format_tag=3))

        np.testing.assert_array_equal(clip.samples, values)

    def test_float_out_of_range_is_clipped_and_counted(self):
        """Значения вне [-1, 1] ограничиваются, счётчик в clip.clipped"""
        values = np.array([1.5, -2.0, 0.5], dtype="<f4")

        clip = decode_wav(wav_bytes(values.tobytes(), bits=32, format_tag=3))

        assert clip.clipped == 2
        np.testing.assert_array_equal(clip.samples, [1.0, -1.0, 0.5])

    def test_24_bit_is_unsupported(self):
        """24-битный PCM - ошибка с названием кодировки"""
        with pytest.raises(UnsupportedEncodingError) as exc_info:
            decode_wav(wav_bytes(b"\x00" * 6, bits=24))

        assert "24-bit" in exc_info.value.details["encoding"]

    def test_compressed_is_unsupported(self):
        """Сжатый формат (mu-law) не поддерживается"""
        with pytest.raises(UnsupportedEncodingError) as exc_info:
            decode_wav(wav_bytes(b"\x00" * 4, bits=8, format_tag=7))

        assert "mu-law" in exc_info.value.details["encoding"]

    @pytest.mark.parametrize(
        "data",
        [
            b"",
            b"RIFX" + b"\x00" * 40,
            b"RIFF\x00\x00\x00\x00WAVE",
        ],
    )
    def test_malformed_header(self, data: bytes):
        """Битый или неполный контейнер - WavFormatError"""
        with pytest.raises(WavFormatError):
            decode_wav(data)


@pytest.mark.unit
class TestEncodeWav:
    """Тесты для encode_wav"""

    def test_empty_clip(self):
        """Пустой клип даёт корректный WAV с пустым чанком data"""
        data = encode_wav(AudioClip(samples=np.zeros(0), sample_rate=22050))

        assert len(data) == 44
        assert decode_wav(data).num_samples == 0

    def test_data_chunk_size(self):
        """22050 отсчётов - чанк data из 44100 байт"""
        data = encode_wav(AudioClip(samples=np.zeros(22050), sample_rate=22050))

        assert struct.unpack_from("<I", data, 40)[0] == 44100
        assert len(data) == 44 + 44100

    def test_round_trip_error_within_quantization(self):
        """decode(encode(c)) отличается от c не больше чем на 1/32768"""
        clip = make_sine(440.0, 0.5, amplitude=0.9)

        decoded = decode_wav(encode_wav(clip))

        error = np.abs(decoded.samples.astype(np.float64) - clip.samples.astype(np.float64))
        assert error.max() <= 1 / 32768


@pytest.mark.unit
class TestResample:
    """Тесты для resample"""

    def test_same_rate_returns_clip(self):
        clip = make_sine(440.0, 0.1)

        assert resample(clip, 22050) is clip

    def test_halving_rate_halves_length(self):
        """44100 -> 22050 на 2 с: ровно вдвое меньше отсчётов"""
        clip = make_sine(1000.0, 2.0, sample_rate=44100)

        result = resample(clip, 22050)

        assert result.sample_rate == 22050
        assert result.num_samples == 44100

    def test_length_rounding(self):
        """Длина результата - round(len * target / source)"""
        clip = AudioClip(samples=np.zeros(1001), sample_rate=44100)

        assert resample(clip, 22050).num_samples == round(1001 * 22050 / 44100)

    def test_peak_frequency_preserved(self):
        """Пик ДПФ 1 кГц остаётся на 1 кГц +- 1 бин"""
        clip = make_sine(1000.0, 1.0, sample_rate=44100)

        result = resample(clip, 22050)

        spectrum = np.abs(np.fft.rfft(result.samples.astype(np.float64)))
        peak_hz = np.argmax(spectrum) * result.sample_rate / result.num_samples
        assert abs(peak_hz - 1000.0) <= result.sample_rate / result.num_samples

    def test_invalid_target_rate(self):
        with pytest.raises(ValueError):
            resample(make_sine(440.0, 0.1), 0)


@pytest.mark.integration
class TestClipFiles:
    """Тесты для load_clip / save_clip"""

    def test_save_and_load(self, tmp_path):
        clip = make_sine(220.0, 0.25)
        path = tmp_path / "nested" / "tone.wav"

        save_clip(clip, path)
        loaded = load_clip(path)

        assert loaded.clip_id == "tone"
        assert loaded.num_samples == clip.num_samples

    def test_missing_file(self, tmp_path):
        """Отсутствующий файл - ошибка использования с путём"""
        with pytest.raises(InputFileNotFoundError) as exc_info:
            load_clip(tmp_path / "missing.wav")

        assert exc_info.value.details["kind"] == "audio file"
