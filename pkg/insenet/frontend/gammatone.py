"""Gammatone spectrogram frontend.

Frames are Hann-windowed (80 ms window, 20 ms hop by default) and their power
spectra weighted by 4th-order gammatone magnitude responses centred on
ERB-rate spaced frequencies. The result is per-band power in dB, clamped at
``db_floor``.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.fft
import scipy.signal

from ..errors import ArgumentError, SignalLengthError
from .audio import SAMPLE_RATE, AudioBuffer, check_sample_rate

ERB_SCALE = 21.4
ERB_SLOPE = 0.00437


@dataclass(frozen=True)
class GammatoneConfig:
    window_ms: float = 80.0
    hop_ms: float = 20.0
    n_bands: int = 32
    f_min: float = 50.0
    f_max: float = 24000.0
    db_floor: float = -120.0
    filter_order: int = 4

    def __post_init__(self):
        if not (self.window_ms > self.hop_ms > 0):
            raise ArgumentError(f"Need window_ms > hop_ms > 0, got {self.window_ms} / {self.hop_ms}")
        if not (0 < self.f_min < self.f_max <= SAMPLE_RATE / 2):
            raise ArgumentError(f"Need 0 < f_min < f_max <= {SAMPLE_RATE / 2}, got {self.f_min} / {self.f_max}")
        if self.n_bands < 2:
            raise ArgumentError(f"Need at least 2 bands, got {self.n_bands}")
        if self.filter_order < 1:
            raise ArgumentError(f"Filter order must be positive, got {self.filter_order}")

    @property
    def window_samples(self) -> int:
        return int(round(self.window_ms * SAMPLE_RATE / 1000))

    @property
    def hop_samples(self) -> int:
        return int(round(self.hop_ms * SAMPLE_RATE / 1000))


@dataclass(frozen=True)
class Spectrogram:
    """Per-band log power, shape (n_bands, n_frames), in dB."""
    values: np.ndarray
    band_centers: np.ndarray
    frame_hop: float
    db_floor: float = -120.0

    @property
    def n_bands(self) -> int:
        return self.values.shape[0]

    @property
    def n_frames(self) -> int:
        return self.values.shape[1]

    def crop(self, start: int, n_frames: int) -> "Spectrogram":
        return Spectrogram(
            values=self.values[:, start:start + n_frames],
            band_centers=self.band_centers,
            frame_hop=self.frame_hop,
            db_floor=self.db_floor,
        )


def hz_to_erb_number(freq_hz):
    return ERB_SCALE * np.log10(1.0 + ERB_SLOPE * np.asarray(freq_hz, dtype=np.float64))


def erb_number_to_hz(erb_number):
    return (np.power(10.0, np.asarray(erb_number, dtype=np.float64) / ERB_SCALE) - 1.0) / ERB_SLOPE


def erb_bandwidth(freq_hz):
    """Equivalent rectangular bandwidth (Hz) at a given frequency."""
    return 24.7 * (4.37e-3 * np.asarray(freq_hz, dtype=np.float64) + 1.0)


def erb_center_frequencies(n_bands: int, f_min: float, f_max: float) -> np.ndarray:
    """Band centres equally spaced on the ERB-rate scale.

    The first centre is exactly ``f_min``; steps are (ERB(f_max) - ERB(f_min)) / n_bands,
    so every centre lies strictly below ``f_max``.
    """
    if n_bands < 2:
        raise ArgumentError(f"Need at least 2 bands, got {n_bands}")
    if not (0 < f_min < f_max):
        raise ArgumentError(f"Need 0 < f_min < f_max, got {f_min} / {f_max}")
    erb_min = hz_to_erb_number(f_min)
    step = (hz_to_erb_number(f_max) - erb_min) / n_bands
    centers = erb_number_to_hz(erb_min + step * np.arange(n_bands))
    centers[0] = f_min
    return centers


@functools.lru_cache(maxsize=8)
def gammatone_weights(config: GammatoneConfig) -> np.ndarray:
    """Power-response weights, shape (n_bands, n_fft // 2 + 1), unit gain at each centre."""
    n_fft = config.window_samples
    freqs = np.fft.rfftfreq(n_fft, d=1.0 / SAMPLE_RATE)
    centers = erb_center_frequencies(config.n_bands, config.f_min, config.f_max)
    bandwidths = 1.019 * erb_bandwidth(centers)
    offsets = (freqs[np.newaxis, :] - centers[:, np.newaxis]) / bandwidths[:, np.newaxis]
    weights = np.power(1.0 + offsets ** 2, -float(config.filter_order))
    weights.setflags(write=False)
    return weights


@functools.lru_cache(maxsize=8)
def _analysis_window(n: int) -> np.ndarray:
    window = scipy.signal.get_window("hann", n, fftbins=False)
    window.setflags(write=False)
    return window


def n_frames_for(n_samples: int, config: GammatoneConfig) -> int:
    return math.ceil(n_samples / config.hop_samples)


def gammatone_spectrogram(audio: AudioBuffer, config: Optional[GammatoneConfig] = None) -> Spectrogram:
    """Compute the Gammatone spectrogram of mono 48 kHz audio.

    The signal is reflection-padded by (window - hop) / 2 samples on each side,
    plus enough on the right to complete the last hop, which gives
    ceil(N / hop) frames; 7.2 s of audio yields 360 frames.

    Raises:
        SampleRateError: If the audio is not at 48 kHz
        SignalLengthError: If the signal is shorter than one window
        ArgumentError: If the audio is not mono
    """
    if config is None:
        config = GammatoneConfig()
    check_sample_rate(audio)
    if audio.channels != 1:
        raise ArgumentError("gammatone_spectrogram expects mono audio; downmix stereo first")
    x = audio.mono
    window = config.window_samples
    hop = config.hop_samples
    if x.size < window:
        raise SignalLengthError(f"Signal has {x.size} samples, need at least one window ({window})")

    pad = (window - hop) // 2
    padded = np.pad(x, (pad, window - hop - pad + (-x.size) % hop), mode="reflect")
    n_frames = n_frames_for(x.size, config)
    frames = np.lib.stride_tricks.sliding_window_view(padded, window)[::hop][:n_frames]

    analysis = _analysis_window(window)
    spectrum = scipy.fft.rfft(frames * analysis, axis=1)
    # one-sided power, scaled so a full-scale sine reads about -3 dB
    power = 2.0 * np.abs(spectrum) ** 2 / np.sum(analysis) ** 2
    band_power = gammatone_weights(config) @ power.T

    floor_power = 10.0 ** (config.db_floor / 10.0)
    with np.errstate(divide="ignore"):
        db = np.where(band_power > floor_power, 10.0 * np.log10(band_power), config.db_floor)
    db = np.maximum(db, config.db_floor).astype(np.float32)

    return Spectrogram(
        values=db,
        band_centers=erb_center_frequencies(config.n_bands, config.f_min, config.f_max),
        frame_hop=hop / SAMPLE_RATE,
        db_floor=config.db_floor,
    )
