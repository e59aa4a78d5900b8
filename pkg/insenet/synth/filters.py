"""Zero-phase Butterworth filters and level scaling for synthetic material."""

from __future__ import annotations

import numpy as np
import scipy.signal

from ..errors import ArgumentError, CannotScaleError
from ..frontend.audio import SAMPLE_RATE, AudioBuffer, check_sample_rate, rms_dbfs

FILTER_ORDER = 8


def _butterworth(audio: AudioBuffer, fc: float, btype: str) -> AudioBuffer:
    check_sample_rate(audio)
    if not (0 < fc < SAMPLE_RATE / 2):
        raise ArgumentError(f"Cutoff must lie in (0, {SAMPLE_RATE / 2}) Hz, got {fc}")
    sos = scipy.signal.butter(FILTER_ORDER, fc, btype=btype, fs=SAMPLE_RATE, output="sos")
    # forward-backward: zero phase
    filtered = scipy.signal.sosfiltfilt(sos, audio.samples, axis=-1)
    return AudioBuffer(samples=filtered, sample_rate=audio.sample_rate)


def highpass(audio: AudioBuffer, fc: float) -> AudioBuffer:
    """8th-order Butterworth high-pass, applied forward and backward."""
    return _butterworth(audio, fc, "highpass")


def lowpass(audio: AudioBuffer, fc: float) -> AudioBuffer:
    """8th-order Butterworth low-pass, applied forward and backward (anchors)."""
    return _butterworth(audio, fc, "lowpass")


def scale_to_level(audio: AudioBuffer, level_db: float) -> AudioBuffer:
    """Scale so the RMS over all channels equals ``level_db`` dBFS.

    Raises:
        CannotScaleError: If the input is digital silence
    """
    current = rms_dbfs(audio.samples)
    if not np.isfinite(current):
        raise CannotScaleError("Cannot scale a silent signal to a target level")
    gain = 10.0 ** ((level_db - current) / 20.0)
    return AudioBuffer(samples=audio.samples * gain, sample_rate=audio.sample_rate)
