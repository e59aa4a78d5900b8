import math
import time

import numpy as np
import pytest
import scipy.signal

from ..errors import ArgumentError, SampleRateError, SignalLengthError
from .audio import SAMPLE_RATE, AudioBuffer
from .gammatone import GammatoneConfig, erb_center_frequencies, gammatone_spectrogram


def _erb_oracle(n_bands, f_min, f_max):
    erb = lambda f: 21.4 * math.log10(1 + 0.00437 * f)
    inv = lambda e: (10 ** (e / 21.4) - 1) / 0.00437
    step = (erb(f_max) - erb(f_min)) / n_bands
    return [inv(erb(f_min) + k * step) for k in range(n_bands)]


def _sine(freq, seconds, level_db=-20.0):
    t = np.arange(int(seconds * SAMPLE_RATE)) / SAMPLE_RATE
    amplitude = math.sqrt(2) * 10 ** (level_db / 20)
    return AudioBuffer(samples=amplitude * np.sin(2 * np.pi * freq * t))


def test_erb_centers_default_bank():
    centers = erb_center_frequencies(32, 50, 24000)
    assert len(centers) == 32
    assert centers[0] == 50
    assert np.all(np.diff(centers) > 0)
    assert np.all(centers < 24000)
    np.testing.assert_allclose(centers, _erb_oracle(32, 50, 24000), rtol=1e-10)


def test_erb_centers_two_bands():
    centers = erb_center_frequencies(2, 50, 24000)
    assert centers[0] == 50
    assert 50 < centers[1] < 24000


@pytest.mark.parametrize("args", [(1, 50, 24000), (32, 0, 24000), (32, 500, 400)])
def test_erb_centers_invalid_range(args):
    with pytest.raises(ArgumentError):
        erb_center_frequencies(*args)


def test_excerpt_shape():
    rng = np.random.default_rng(0)
    audio = AudioBuffer(samples=0.1 * rng.standard_normal(345600))
    start = time.time()
    spec = gammatone_spectrogram(audio)
    elapsed = time.time() - start
    assert spec.values.shape == (32, 360)
    assert elapsed < 1.0


@pytest.mark.parametrize("n_samples", [3840, 4000, 48000, 345600, 345617, 346000])
def test_frame_count_law(n_samples):
    audio = AudioBuffer(samples=np.zeros(n_samples))
    assert gammatone_spectrogram(audio).n_frames == math.ceil(n_samples / 960)


@pytest.mark.parametrize("n_samples", [4001, 50017])
def test_frame_count_law_other_framing(n_samples):
    config = GammatoneConfig(window_ms=60.0, hop_ms=10.0)
    audio = AudioBuffer(samples=np.zeros(n_samples))
    assert gammatone_spectrogram(audio, config).n_frames == math.ceil(n_samples / 480)


def test_silence_is_floor():
    spec = gammatone_spectrogram(AudioBuffer(samples=np.zeros(50000)))
    assert np.all(spec.values == -120.0)


def test_values_never_below_floor():
    rng = np.random.default_rng(3)
    spec = gammatone_spectrogram(AudioBuffer(samples=1e-9 * rng.standard_normal(20000)))
    assert spec.values.min() >= -120.0


@pytest.mark.parametrize("band", [0, 5, 12, 20, 27, 31])
def test_band_center_sine_selects_band(band):
    config = GammatoneConfig()
    center = erb_center_frequencies(32, 50, 24000)[band]
    spec = gammatone_spectrogram(_sine(center, 1.0), config)
    interior = spec.values[:, 2:-2]
    hits = np.mean(np.argmax(interior, axis=0) == band)
    assert hits >= 0.95


@pytest.mark.parametrize("band", [3, 15, 26])
def test_band_center_sine_matches_time_domain_filterbank(band):
    centers = erb_center_frequencies(32, 50, 24000)
    audio = _sine(centers[band], 1.0)
    x = audio.mono
    levels = []
    for c in centers:
        b, _ = scipy.signal.gammatone(c, "fir", numtaps=SAMPLE_RATE // 10, fs=SAMPLE_RATE)
        _, h = scipy.signal.freqz(b, worN=[c], fs=SAMPLE_RATE)
        y = scipy.signal.fftconvolve(x, b)[:x.size] / abs(h[0])
        levels.append(np.mean(y[SAMPLE_RATE // 4:] ** 2))
    assert int(np.argmax(levels)) == band
    spec = gammatone_spectrogram(audio)
    assert int(np.argmax(spec.values[:, 25])) == int(np.argmax(levels))


def test_energy_monotonicity():
    rng = np.random.default_rng(1)
    x = 0.05 * rng.standard_normal(48000)
    quiet = gammatone_spectrogram(AudioBuffer(samples=x))
    loud = gammatone_spectrogram(AudioBuffer(samples=2.0 * x))
    assert np.all(loud.values >= quiet.values)


def test_time_reversal_symmetry():
    rng = np.random.default_rng(2)
    x = 0.1 * rng.standard_normal(96000)
    forward = gammatone_spectrogram(AudioBuffer(samples=x))
    backward = gammatone_spectrogram(AudioBuffer(samples=x[::-1].copy()))
    np.testing.assert_allclose(backward.values[:, 2:-2], forward.values[:, ::-1][:, 2:-2], atol=1e-3)


def test_wrong_rate_rejected():
    with pytest.raises(SampleRateError):
        gammatone_spectrogram(AudioBuffer(samples=np.zeros(48000), sample_rate=44100))


def test_too_short_rejected():
    with pytest.raises(SignalLengthError):
        gammatone_spectrogram(AudioBuffer(samples=np.zeros(1000)))


def test_config_validation():
    with pytest.raises(ArgumentError):
        GammatoneConfig(window_ms=20, hop_ms=20)
    with pytest.raises(ArgumentError):
        GammatoneConfig(f_max=30000)
