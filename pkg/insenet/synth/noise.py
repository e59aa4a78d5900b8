"""Coloured noise generation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import ArgumentError
from ..frontend.audio import SAMPLE_RATE, AudioBuffer
from .filters import highpass, scale_to_level

NOISE_COLORS = ("white", "pink", "brown")


@dataclass(frozen=True)
class NoiseSpec:
    color: str
    duration_s: float = 7.2
    seed: int = 0
    target_level_db: float = -110.0
    highpass_fc: Optional[float] = None

    def __post_init__(self):
        if self.color not in NOISE_COLORS:
            raise ArgumentError(f"Unknown noise color '{self.color}', expected one of {NOISE_COLORS}")
        if self.duration_s <= 0:
            raise ArgumentError(f"Duration must be positive, got {self.duration_s}")
        if self.target_level_db > 0:
            raise ArgumentError(f"Target level must be <= 0 dBFS, got {self.target_level_db}")


def _pink(white: np.ndarray) -> np.ndarray:
    # 1/sqrt(f) magnitude shaping in the FFT domain: -3 dB per octave
    spectrum = np.fft.rfft(white)
    freqs = np.fft.rfftfreq(white.size, d=1.0 / SAMPLE_RATE)
    scaling = np.zeros_like(freqs)
    scaling[1:] = 1.0 / np.sqrt(freqs[1:])
    return np.fft.irfft(spectrum * scaling, n=white.size)


def _brown(white: np.ndarray) -> np.ndarray:
    walk = np.cumsum(white)
    return walk - walk.mean()


def generate_noise(spec: NoiseSpec) -> AudioBuffer:
    """Mono 48 kHz noise of the requested color; a pure function of ``spec``.

    The optional high-pass runs before level scaling so the final RMS equals
    ``target_level_db`` exactly.
    """
    n_samples = int(round(spec.duration_s * SAMPLE_RATE))
    rng = np.random.default_rng(spec.seed)
    white = rng.standard_normal(n_samples)
    if spec.color == "white":
        samples = white
    elif spec.color == "pink":
        samples = _pink(white)
    else:
        samples = _brown(white)
    audio = AudioBuffer(samples=samples)
    if spec.highpass_fc is not None:
        audio = highpass(audio, spec.highpass_fc)
    return scale_to_level(audio, spec.target_level_db)
