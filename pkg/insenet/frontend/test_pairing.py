import numpy as np
import pytest

from ..errors import NormalizationStateError, PairingError
from ..training.norm_stats import NormStats
from .gammatone import Spectrogram, erb_center_frequencies
from .pairing import PairedInput, normalize_pair, pair_spectrograms, window_pairs
from .spectrogram_file import load_spectrogram, save_spectrogram

CENTERS = erb_center_frequencies(32, 50, 24000)


def _spec(values):
    return Spectrogram(values=np.asarray(values, dtype=np.float32), band_centers=CENTERS, frame_hop=0.02)


def _random_spec(n_frames, seed=0):
    return _spec(np.random.default_rng(seed).uniform(-120, 0, (32, n_frames)))


def test_pair_shape_and_channel_order():
    ref, deg = _random_spec(360, 0), _random_spec(360, 1)
    pair = pair_spectrograms(ref, deg)
    assert pair.tensor.shape == (2, 32, 360)
    assert not pair.normalized
    np.testing.assert_array_equal(pair.reference, ref.values)
    np.testing.assert_array_equal(pair.degraded, deg.values)


def test_pair_identical_inputs():
    s = _random_spec(360)
    pair = pair_spectrograms(s, s)
    np.testing.assert_array_equal(pair.tensor[0], pair.tensor[1])


def test_short_input_rejected():
    with pytest.raises(PairingError):
        pair_spectrograms(_random_spec(357), _random_spec(357))


def test_shape_mismatch_rejected():
    with pytest.raises(PairingError):
        pair_spectrograms(_random_spec(360), _random_spec(361))


def test_long_input_center_cropped():
    s = _random_spec(370)
    pair = pair_spectrograms(s, s)
    np.testing.assert_array_equal(pair.reference, s.values[:, 5:365])


def test_window_pairs_right_aligns_last_window():
    s = _random_spec(800)
    windows = window_pairs(s, s)
    assert len(windows) == 3
    np.testing.assert_array_equal(windows[1].reference, s.values[:, 360:720])
    np.testing.assert_array_equal(windows[2].reference, s.values[:, 440:800])


def test_normalize_identity_stats():
    pair = pair_spectrograms(_random_spec(360, 0), _random_spec(360, 1))
    normalized = normalize_pair(pair, NormStats(mean=np.zeros(32), std=np.ones(32)))
    assert normalized.normalized
    np.testing.assert_array_equal(normalized.tensor, pair.tensor)


def test_normalize_constant_pair_with_own_stats():
    pair = pair_spectrograms(_spec(np.full((32, 360), -40.0)), _spec(np.full((32, 360), -40.0)))
    stats = NormStats(mean=np.full(32, -40.0), std=np.zeros(32))
    assert np.all(normalize_pair(pair, stats).tensor == 0)


def test_normalize_matches_per_band_formula():
    rng = np.random.default_rng(5)
    pair = pair_spectrograms(_random_spec(360, 2), _random_spec(360, 3))
    mean, std = rng.uniform(-80, -20, 32), rng.uniform(1, 30, 32)
    out = normalize_pair(pair, NormStats(mean=mean, std=std)).tensor
    for c in range(2):
        for band in range(32):
            expected = (pair.tensor[c, band].astype(np.float64) - mean[band]) / std[band]
            np.testing.assert_allclose(out[c, band], expected, rtol=1e-5, atol=1e-5)


def test_double_normalization_rejected():
    pair = PairedInput(tensor=np.zeros((2, 32, 360), dtype=np.float32), normalized=True)
    with pytest.raises(NormalizationStateError):
        normalize_pair(pair, NormStats(mean=np.zeros(32), std=np.ones(32)))


def test_gtspec_file_preserves_values(tmp_path):
    s = _random_spec(360, 7)
    path = tmp_path / "x.gtspec"
    save_spectrogram(path, s)
    assert path.read_bytes()[:7] == b"GTSPEC1"
    loaded = load_spectrogram(path)
    np.testing.assert_array_equal(loaded.values, s.values)
    np.testing.assert_array_equal(loaded.band_centers, CENTERS)
    assert loaded.frame_hop == 0.02
