"""Audio buffers, WAV I/O and stereo downmix."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import soundfile as sf

from ..errors import ArgumentError, SampleRateError, SignalLengthError

SAMPLE_RATE = 48000


@dataclass(frozen=True)
class AudioBuffer:
    """PCM samples, shape (channels, n_samples), full scale ±1.0."""
    samples: np.ndarray
    sample_rate: int = SAMPLE_RATE

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim == 1:
            samples = samples[np.newaxis, :]
        if samples.ndim != 2 or samples.shape[0] not in (1, 2):
            raise ArgumentError(f"Expected 1 or 2 channels, got samples of shape {samples.shape}")
        if not np.all(np.isfinite(samples)):
            raise ArgumentError("Audio contains non-finite samples")
        object.__setattr__(self, "samples", samples)

    @property
    def channels(self) -> int:
        return self.samples.shape[0]

    @property
    def n_samples(self) -> int:
        return self.samples.shape[1]

    @property
    def duration_s(self) -> float:
        return self.n_samples / self.sample_rate

    @property
    def mono(self) -> np.ndarray:
        """The single channel of a mono buffer."""
        if self.channels != 1:
            raise ArgumentError("Buffer is not mono")
        return self.samples[0]


def check_sample_rate(audio: AudioBuffer) -> None:
    if audio.sample_rate != SAMPLE_RATE:
        raise SampleRateError(f"Expected {SAMPLE_RATE} Hz audio, got {audio.sample_rate} Hz")


def read_wav(path: str | Path) -> AudioBuffer:
    """Read a 16/24-bit integer or 32-bit float WAV file at 48 kHz."""
    data, sample_rate = sf.read(str(path), dtype="float64", always_2d=True)
    if data.shape[0] == 0:
        raise SignalLengthError(f"Empty audio file: {path}")
    audio = AudioBuffer(samples=data.T, sample_rate=int(sample_rate))
    check_sample_rate(audio)
    return audio


def write_wav(path: str | Path, audio: AudioBuffer, subtype: str = "PCM_24") -> None:
    """Write a buffer as WAV (24-bit PCM by default)."""
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    sf.write(str(path), audio.samples.T, audio.sample_rate, subtype=subtype)


def downmix_mid(stereo: AudioBuffer) -> AudioBuffer:
    """Mid signal (L + R) / 2 of a stereo buffer."""
    if stereo.channels != 2:
        raise ArgumentError(f"downmix_mid expects 2 channels, got {stereo.channels}")
    mid = 0.5 * (stereo.samples[0] + stereo.samples[1])
    return AudioBuffer(samples=mid, sample_rate=stereo.sample_rate)


def to_mono(audio: AudioBuffer) -> AudioBuffer:
    """Return mono audio unchanged and the mid downmix of stereo audio."""
    if audio.channels == 1:
        return audio
    return downmix_mid(audio)


def rms_dbfs(samples: np.ndarray) -> float:
    """RMS level in dB relative to full scale; -inf for digital silence."""
    power = float(np.mean(np.square(samples)))
    if power == 0.0:
        return float("-inf")
    return 10.0 * np.log10(power)
