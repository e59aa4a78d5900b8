import numpy as np
import pytest
import soundfile as sf

from ..errors import ArgumentError, SampleRateError
from .audio import AudioBuffer, downmix_mid, read_wav, rms_dbfs, write_wav


def test_downmix_identical_channels():
    x = np.linspace(-0.5, 0.5, 1000)
    mid = downmix_mid(AudioBuffer(samples=np.stack([x, x])))
    np.testing.assert_array_equal(mid.mono, x)


def test_downmix_cancellation():
    x = np.random.default_rng(0).uniform(-1, 1, 1000)
    mid = downmix_mid(AudioBuffer(samples=np.stack([x, -x])))
    assert np.all(mid.mono == 0)


def test_downmix_matches_mean_and_is_linear():
    rng = np.random.default_rng(1)
    left, right = rng.uniform(-0.5, 0.5, (2, 2000))
    mid = downmix_mid(AudioBuffer(samples=np.stack([left, right])))
    np.testing.assert_allclose(mid.mono, (left + right) / 2)

    other = rng.uniform(-0.2, 0.2, (2, 2000))
    a, b = 0.3, -1.7
    combined = downmix_mid(AudioBuffer(samples=a * np.stack([left, right]) + b * other))
    expected = a * mid.mono + b * downmix_mid(AudioBuffer(samples=other)).mono
    np.testing.assert_allclose(combined.mono, expected, atol=1e-12)


def test_downmix_rejects_mono():
    with pytest.raises(ArgumentError):
        downmix_mid(AudioBuffer(samples=np.zeros(100)))


def test_non_finite_rejected():
    with pytest.raises(ArgumentError):
        AudioBuffer(samples=np.array([0.0, np.nan]))


@pytest.mark.parametrize("subtype", ["PCM_16", "PCM_24", "FLOAT"])
def test_wav_formats_are_read(tmp_path, subtype):
    x = 0.25 * np.sin(np.linspace(0, 100, 4800))
    path = tmp_path / "x.wav"
    write_wav(path, AudioBuffer(samples=np.stack([x, -x])), subtype=subtype)
    audio = read_wav(path)
    assert audio.channels == 2
    assert audio.sample_rate == 48000
    np.testing.assert_allclose(audio.samples[0], x, atol=1e-4)


def test_other_rates_rejected(tmp_path):
    path = tmp_path / "cd.wav"
    sf.write(str(path), np.zeros(4410), 44100, subtype="PCM_16")
    with pytest.raises(SampleRateError):
        read_wav(path)


def test_rms_dbfs():
    assert rms_dbfs(np.zeros(10)) == float("-inf")
    assert rms_dbfs(np.ones(10)) == pytest.approx(0.0)
