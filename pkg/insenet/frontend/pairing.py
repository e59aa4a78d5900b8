"""Pairing of reference/degraded spectrograms into model inputs."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import TYPE_CHECKING, List

import numpy as np

from ..errors import NormalizationStateError, PairingError, ShapeError
from .gammatone import Spectrogram

if TYPE_CHECKING:
    from ..training.norm_stats import NormStats

PAIR_FRAMES = 360  # 7.2 s at a 20 ms hop


@dataclass(frozen=True)
class PairedInput:
    """Stacked spectrograms, shape (2, n_bands, n_frames); channel 0 is the reference."""
    tensor: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        if self.tensor.ndim != 3 or self.tensor.shape[0] != 2:
            raise ShapeError(f"Paired input must have shape (2, bands, frames), got {self.tensor.shape}")

    @property
    def reference(self) -> np.ndarray:
        return self.tensor[0]

    @property
    def degraded(self) -> np.ndarray:
        return self.tensor[1]


def _check_compatible(ref: Spectrogram, deg: Spectrogram) -> None:
    if ref.values.shape != deg.values.shape:
        raise PairingError(f"Spectrogram shapes differ: {ref.values.shape} vs {deg.values.shape}")
    if ref.frame_hop != deg.frame_hop or not np.allclose(ref.band_centers, deg.band_centers):
        raise PairingError("Spectrograms were computed with different Gammatone configurations")


def _stack(ref: np.ndarray, deg: np.ndarray) -> PairedInput:
    return PairedInput(tensor=np.stack([ref, deg]).astype(np.float32), normalized=False)


def pair_spectrograms(ref: Spectrogram, deg: Spectrogram, *, n_frames: int = PAIR_FRAMES) -> PairedInput:
    """Stack a reference and a degraded spectrogram into one model input.

    Inputs longer than ``n_frames`` are centre-cropped; shorter ones are rejected.

    Raises:
        PairingError: On shape/config mismatch or too few frames
    """
    _check_compatible(ref, deg)
    if ref.n_frames < n_frames:
        raise PairingError(f"Need {n_frames} frames, got {ref.n_frames}")
    start = (ref.n_frames - n_frames) // 2
    return _stack(ref.values[:, start:start + n_frames], deg.values[:, start:start + n_frames])


def window_pairs(ref: Spectrogram, deg: Spectrogram, *, n_frames: int = PAIR_FRAMES) -> List[PairedInput]:
    """Split a long pair into consecutive ``n_frames`` windows; the last one is right-aligned."""
    _check_compatible(ref, deg)
    total = ref.n_frames
    if total < n_frames:
        raise PairingError(f"Need {n_frames} frames, got {total}")
    starts = list(range(0, total - n_frames + 1, n_frames))
    if starts[-1] + n_frames < total:
        starts.append(total - n_frames)
    return [_stack(ref.values[:, s:s + n_frames], deg.values[:, s:s + n_frames]) for s in starts]


def normalize_pair(pair: PairedInput, stats: "NormStats") -> PairedInput:
    """Apply per-band (value - mean) / std to both channels.

    Bands with zero standard deviation are divided by 1.

    Raises:
        NormalizationStateError: If the pair is already normalized
        ShapeError: If the statistics do not match the number of bands
    """
    if pair.normalized:
        raise NormalizationStateError("Paired input is already normalized")
    mean = np.asarray(stats.mean, dtype=np.float64)
    std = np.asarray(stats.std, dtype=np.float64)
    n_bands = pair.tensor.shape[1]
    if mean.shape != (n_bands,) or std.shape != (n_bands,):
        raise ShapeError(f"Normalization statistics have {mean.size} bands, input has {n_bands}")
    std = np.where(std == 0, 1.0, std)
    tensor = (pair.tensor - mean[np.newaxis, :, np.newaxis]) / std[np.newaxis, :, np.newaxis]
    return replace(pair, tensor=tensor.astype(np.float32), normalized=True)
