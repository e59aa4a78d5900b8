"""Fully synthetic corpus with known quality ordering, for end-to-end checks of the pipeline."""

from __future__ import annotations

from pathlib import Path
from typing import List, Sequence

import numpy as np

from ..dataset.manifest import DatasetEntry, Manifest
from ..errors import ArgumentError
from ..frontend.audio import SAMPLE_RATE, AudioBuffer, rms_dbfs, write_wav
from .filters import scale_to_level
from .noise import NoiseSpec, generate_noise

TOY_SNR_LEVELS = (35, 29, 23, 17, 11, 5)
TOY_CODEC = "additive_noise"
TOY_SECONDS = 7.2


def _reference(rng: np.random.Generator, seed: int) -> AudioBuffer:
    t = np.arange(int(round(TOY_SECONDS * SAMPLE_RATE))) / SAMPLE_RATE
    tones = np.zeros_like(t)
    for _ in range(rng.integers(2, 5)):
        freq = rng.uniform(100.0, 8000.0)
        tones += rng.uniform(0.2, 1.0) * np.sin(2 * np.pi * freq * t + rng.uniform(0, 2 * np.pi))
    color = ("white", "pink", "brown")[int(rng.integers(3))]
    noise = generate_noise(NoiseSpec(color=color, duration_s=TOY_SECONDS, seed=seed, target_level_db=-40.0))
    mixture = scale_to_level(AudioBuffer(samples=tones), -20.0).mono + noise.mono
    return scale_to_level(AudioBuffer(samples=mixture), -20.0)


def snr_label(index: int, n_levels: int) -> float:
    """Labels fall linearly from 5 (cleanest level) to 1 (noisiest)."""
    return 5.0 - 4.0 * index / (n_levels - 1)


def make_toy_manifest(
    out_dir: str | Path,
    *,
    n_excerpts: int = 20,
    snr_levels: Sequence[int] = TOY_SNR_LEVELS,
    seed: int = 0
) -> Manifest:
    """Tone-plus-noise references degraded by white noise at decreasing SNRs.

    ``bitrate_kbps`` carries the SNR in dB, so the bitrate-ranking diagnostic
    applies: a higher value always means better quality.
    """
    snr_levels = sorted(snr_levels, reverse=True)
    if len(snr_levels) < 2:
        raise ArgumentError("Need at least two SNR levels")
    out_dir = Path(out_dir)
    rng = np.random.default_rng(seed)
    entries: List[DatasetEntry] = []
    for i in range(n_excerpts):
        excerpt_id = f"toy_{i:04d}"
        ref = _reference(rng, seed * 100000 + i)
        ref_path = out_dir / f"{excerpt_id}.wav"
        write_wav(ref_path, ref)
        signal_db = rms_dbfs(ref.mono)
        for level_index, snr in enumerate(snr_levels):
            noise = rng.standard_normal(ref.n_samples)
            noise *= 10.0 ** ((signal_db - snr - rms_dbfs(noise)) / 20.0)
            deg_path = out_dir / f"{excerpt_id}_snr{snr}.wav"
            write_wav(deg_path, AudioBuffer(samples=np.clip(ref.mono + noise, -1.0, 1.0)))
            entries.append(DatasetEntry(
                ref_path=str(ref_path),
                deg_path=str(deg_path),
                label=snr_label(level_index, len(snr_levels)),
                codec=TOY_CODEC,
                bitrate_kbps=int(snr),
                content_type="mixed",
                excerpt_id=excerpt_id,
            ))
    print(f"Wrote {len(entries)} toy pairs from {n_excerpts} excerpts to {out_dir}")
    return Manifest(entries=tuple(entries))
