import numpy as np
import pytest
import scipy.signal

from ..errors import ArgumentError, CannotScaleError
from ..frontend.audio import SAMPLE_RATE, AudioBuffer, read_wav, rms_dbfs
from ..frontend.gammatone import gammatone_spectrogram
from .filters import highpass, lowpass, scale_to_level
from .noise import NoiseSpec, generate_noise
from .pairs import make_synthetic_pairs


def _psd_slope(x):
    freqs, psd = scipy.signal.welch(x, fs=SAMPLE_RATE, nperseg=8192)
    band = (freqs >= 100) & (freqs <= 10000)
    slope, _ = np.polyfit(np.log2(freqs[band]), 10 * np.log10(psd[band]), 1)
    return slope


def _sine(freq, seconds=1.0, amplitude=0.5):
    t = np.arange(int(seconds * SAMPLE_RATE)) / SAMPLE_RATE
    return AudioBuffer(samples=amplitude * np.sin(2 * np.pi * freq * t))


@pytest.mark.parametrize("color,low,high", [("white", -1, 1), ("pink", -4, -2), ("brown", -7, -5)])
def test_psd_slopes(color, low, high):
    audio = generate_noise(NoiseSpec(color=color, duration_s=5, seed=1, target_level_db=-20))
    assert low <= _psd_slope(audio.mono) <= high


def test_noise_is_deterministic():
    spec = NoiseSpec(color="pink", duration_s=1, seed=7, target_level_db=-30)
    np.testing.assert_array_equal(generate_noise(spec).samples, generate_noise(spec).samples)


def test_noise_spec_validation():
    with pytest.raises(ArgumentError):
        NoiseSpec(color="violet")
    with pytest.raises(ArgumentError):
        NoiseSpec(color="white", duration_s=0)


def test_highpass_stopband():
    x = _sine(1000)
    y = highpass(x, 10000)
    assert rms_dbfs(y.mono) <= rms_dbfs(x.mono) - 40


def test_highpass_passband():
    x = _sine(20000)
    y = highpass(x, 10000)
    interior = slice(SAMPLE_RATE // 10, -SAMPLE_RATE // 10)
    assert abs(rms_dbfs(y.mono[interior]) - rms_dbfs(x.mono[interior])) <= 1.0


def test_highpass_of_silence_is_silence():
    assert np.all(highpass(AudioBuffer(samples=np.zeros(4800)), 10000).samples == 0)


def test_filter_cutoff_validation():
    with pytest.raises(ArgumentError):
        highpass(_sine(100), 24000)
    with pytest.raises(ArgumentError):
        lowpass(_sine(100), 0)


def test_lowpass_anchor_removes_high_band():
    x = _sine(10000)
    assert rms_dbfs(lowpass(x, 3500).mono) <= rms_dbfs(x.mono) - 40


@pytest.mark.parametrize("level", [-108.0, -60.0, -3.0])
def test_scale_to_level(level):
    noise = generate_noise(NoiseSpec(color="white", duration_s=1, seed=2, target_level_db=-20))
    assert abs(rms_dbfs(scale_to_level(noise, level).mono) - level) <= 0.01
    assert abs(rms_dbfs(scale_to_level(_sine(997, amplitude=1.0), level).mono) - level) <= 0.01


def test_scale_to_own_level_is_identity():
    x = _sine(440)
    np.testing.assert_allclose(scale_to_level(x, rms_dbfs(x.mono)).samples, x.samples, rtol=1e-12)


def test_scale_silence_fails():
    with pytest.raises(CannotScaleError):
        scale_to_level(AudioBuffer(samples=np.zeros(100)), -20)


def test_filter_then_scale_hits_level():
    spec = NoiseSpec(color="brown", duration_s=1, seed=3, target_level_db=-110, highpass_fc=10000)
    assert abs(rms_dbfs(generate_noise(spec).mono) + 110) <= 0.01


def test_synthetic_pairs(tmp_path):
    specs = [NoiseSpec(color=c, seed=1) for c in ("white", "pink", "brown")]
    entries = make_synthetic_pairs(specs, True, tmp_path)
    assert len(entries) >= 4
    assert all(e.label == 5.0 for e in entries)
    assert {e.content_type for e in entries} == {"noise", "silence"}
    for e in entries:
        ref = read_wav(e.ref_path)
        assert ref.n_samples == 345600
        if e.content_type == "noise":
            assert rms_dbfs(ref.mono) <= -108
        else:
            spec = gammatone_spectrogram(ref)
            assert np.all(spec.values == spec.db_floor)


def test_no_specs_no_silence(tmp_path):
    assert make_synthetic_pairs([], False, tmp_path) == []
