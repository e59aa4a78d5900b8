"""Segmentation of long references into fixed-length excerpts."""

from __future__ import annotations

from typing import List

from ..frontend.audio import SAMPLE_RATE, AudioBuffer, check_sample_rate

EXCERPT_SECONDS = 7.2


def segment_excerpts(audio: AudioBuffer, length_s: float = EXCERPT_SECONDS) -> List[AudioBuffer]:
    """Consecutive non-overlapping segments; a trailing remainder shorter than ``length_s`` is dropped."""
    check_sample_rate(audio)
    length = int(round(length_s * SAMPLE_RATE))
    n_segments = audio.n_samples // length
    return [
        AudioBuffer(samples=audio.samples[:, i * length:(i + 1) * length], sample_rate=audio.sample_rate)
        for i in range(n_segments)
    ]
