import numpy as np
import pytest
from scipy.signal import get_window

from adff.audio.frontend import (
    HOP_SAMPLES,
    LOG_EPS,
    LOG_FLOOR,
    N_BINS,
    N_FFT,
    N_MELS,
    SAMPLE_RATE,
    AudioClip,
    extract,
    frame_count,
    load_audio,
    log_compress,
    mel_filterbank,
    mel_project,
    pad_to_length,
    stft_power,
)
from adff.core.exceptions import AudioDecodeError, FrontendError


def _sine(freq: float, seconds: float, amplitude: float = 0.5) -> np.ndarray:
    t = np.arange(int(round(seconds * SAMPLE_RATE))) / SAMPLE_RATE
    return amplitude * np.sin(2 * np.pi * freq * t)


class TestLoadAudio:
    """Test decoding, downmixing and resampling."""

    def test_mono_44k_is_returned_as_is(self, tmp_path, write_wav):
        samples = _sine(440.0, 0.5)
        path = write_wav(tmp_path / "a.wav", samples)
        clip = load_audio(path)
        assert clip.sample_rate == SAMPLE_RATE
        np.testing.assert_allclose(clip.samples, samples, atol=1e-7)

    def test_stereo_is_averaged(self, tmp_path, write_wav):
        left = _sine(440.0, 0.2)
        stereo = np.stack([left, np.zeros_like(left)], axis=1)
        clip = load_audio(write_wav(tmp_path / "s.wav", stereo))
        np.testing.assert_allclose(clip.samples, left / 2, atol=1e-7)

    def test_22k_is_resampled(self, tmp_path, write_wav):
        path = write_wav(tmp_path / "low.wav", np.zeros(22050), sample_rate=22050)
        clip = load_audio(path)
        assert clip.sample_rate == SAMPLE_RATE
        assert abs(clip.n_samples - SAMPLE_RATE) <= 1

    def test_missing_file(self, tmp_path):
        with pytest.raises(AudioDecodeError, match="unreadable file"):
            load_audio(tmp_path / "nope.wav")

    def test_corrupt_file(self, tmp_path):
        path = tmp_path / "bad.wav"
        path.write_bytes(b"RIFF\x00\x00garbage-not-audio")
        with pytest.raises(AudioDecodeError):
            load_audio(path)

    def test_zero_length(self, tmp_path, write_wav):
        path = write_wav(tmp_path / "empty.wav", np.zeros(0))
        with pytest.raises(AudioDecodeError, match="zero-length"):
            load_audio(path)


class TestPadding:
    """Test zero padding to a target duration."""

    def test_pads_with_trailing_zeros(self):
        clip = AudioClip(samples=np.ones(3 * SAMPLE_RATE))
        padded = pad_to_length(clip, 5.0)
        assert padded.n_samples == 5 * SAMPLE_RATE
        assert np.all(padded.samples[3 * SAMPLE_RATE:] == 0)
        assert np.all(padded.samples[: 3 * SAMPLE_RATE] == 1)

    def test_never_truncates(self):
        clip = AudioClip(samples=np.ones(6 * SAMPLE_RATE))
        assert pad_to_length(clip, 5.0) is clip


class TestSTFT:
    """Test the power spectrogram against direct computation."""

    @pytest.mark.parametrize("seconds,frames", [(20.0, 2001), (5.0, 501)])
    def test_frame_count(self, seconds, frames):
        n = int(seconds * SAMPLE_RATE)
        assert frame_count(n) == frames
        power = stft_power(AudioClip(samples=np.zeros(n)))
        assert power.shape == (frames, N_BINS)

    def test_silence_is_zero(self):
        power = stft_power(AudioClip(samples=np.zeros(SAMPLE_RATE)))
        assert np.all(power == 0)

    def test_sine_peaks_at_its_bin(self):
        power = stft_power(AudioClip(samples=_sine(1000.0, 1.0)))
        # 1 kHz sits exactly on bin 60 (44100 / 2646 Hz spacing)
        interior = power[5:-5]
        assert np.all(interior.argmax(axis=1) == 60)

    def test_matches_direct_dft_on_interior_frame(self):
        rng = np.random.default_rng(0)
        samples = rng.standard_normal(SAMPLE_RATE)
        power = stft_power(AudioClip(samples=samples))

        t = 20
        start = t * HOP_SAMPLES - N_FFT // 2
        frame = samples[start: start + N_FFT] * get_window("hann", N_FFT, fftbins=True)
        expected = np.abs(np.fft.rfft(frame)) ** 2
        np.testing.assert_allclose(power[t], expected, rtol=1e-6, atol=1e-9 * expected.max())

    def test_parseval_on_interior_frame(self):
        rng = np.random.default_rng(1)
        samples = rng.standard_normal(SAMPLE_RATE)
        power = stft_power(AudioClip(samples=samples))

        t = 30
        start = t * HOP_SAMPLES - N_FFT // 2
        weighted = samples[start: start + N_FFT] * get_window("hann", N_FFT, fftbins=True)
        one_sided = power[t, 0] + 2 * power[t, 1:-1].sum() + power[t, -1]
        assert one_sided == pytest.approx(N_FFT * np.sum(weighted**2), rel=1e-9)

    def test_amplitude_scaling_is_quadratic(self):
        samples = _sine(300.0, 0.5)
        base = stft_power(AudioClip(samples=samples))
        scaled = stft_power(AudioClip(samples=3 * samples))
        np.testing.assert_allclose(scaled, 9 * base, rtol=1e-9, atol=1e-12)

    def test_clip_shorter_than_hop(self):
        with pytest.raises(FrontendError, match="shorter than one hop"):
            stft_power(AudioClip(samples=np.zeros(HOP_SAMPLES - 1)))

    def test_wrong_sample_rate(self):
        with pytest.raises(FrontendError):
            stft_power(AudioClip(samples=np.zeros(22050), sample_rate=22050))


class TestMelProjection:
    """Test the fixed Mel filterbank."""

    def test_filterbank_shape_and_sign(self):
        matrix = mel_filterbank()
        assert matrix.shape == (N_BINS, N_MELS)
        assert np.all(matrix >= 0)
        assert not matrix.flags.writeable

    def test_zero_spectrum(self):
        assert np.all(mel_project(np.zeros((3, N_BINS))) == 0)

    def test_unit_spectrum_selects_a_row(self):
        power = np.zeros((1, N_BINS))
        power[0, 200] = 1.0
        np.testing.assert_array_equal(mel_project(power)[0], mel_filterbank()[200])

    def test_flat_spectrum_gives_filter_areas(self):
        level = 2.5
        mel = mel_project(np.full((1, N_BINS), level))
        np.testing.assert_allclose(mel[0], level * mel_filterbank().sum(axis=0), rtol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(FrontendError, match="dimension mismatch"):
            mel_project(np.zeros((4, N_BINS - 1)))


class TestLogCompression:
    """Test the log(x + eps) stage."""

    def test_zero_maps_to_floor(self):
        assert log_compress(np.zeros(1))[0] == pytest.approx(np.log(LOG_EPS))
        assert LOG_FLOOR == pytest.approx(-13.815510557964274)

    def test_one_minus_eps_maps_to_zero(self):
        assert abs(log_compress(np.array([1.0 - LOG_EPS]))[0]) < 1e-12

    def test_monotone(self):
        values = log_compress(np.array([0.0, 1e-3, 1.0, 100.0]))
        assert np.all(np.diff(values) > 0)

    def test_negative_input(self):
        with pytest.raises(FrontendError, match="negative"):
            log_compress(np.array([1.0, -0.1]))


class TestExtract:
    """Test the composed frontend."""

    def test_shape_and_dtype(self):
        mel = extract(AudioClip(samples=_sine(440.0, 5.0)), source="x.wav")
        assert mel.data.shape == (501, N_MELS)
        assert mel.data.dtype == np.float32
        assert mel.to_dict()["source"] == "x.wav"
        assert mel.to_dict()["n_samples"] == 5 * SAMPLE_RATE

    def test_silence_is_constant_floor(self):
        mel = extract(AudioClip(samples=np.zeros(SAMPLE_RATE)))
        assert np.all(mel.data == np.float32(LOG_FLOOR))

    def test_deterministic(self):
        samples = np.random.default_rng(5).standard_normal(SAMPLE_RATE // 2)
        first = extract(AudioClip(samples=samples)).data
        second = extract(AudioClip(samples=samples.copy())).data
        assert first.tobytes() == second.tobytes()
