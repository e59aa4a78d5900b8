"""Per-band normalization statistics estimated on a training split."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence

import numpy as np

from ..dataset.manifest import DatasetEntry
from ..errors import ArgumentError, ShapeError
from ..frontend.featurizer import PairFeaturizer


@dataclass(frozen=True)
class NormStats:
    """Per-band mean and standard deviation shared by both input channels."""
    mean: np.ndarray
    std: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=np.float64)
        std = np.asarray(self.std, dtype=np.float64)
        if mean.ndim != 1 or mean.shape != std.shape:
            raise ShapeError(f"mean and std must be 1-D of equal length, got {mean.shape} and {std.shape}")
        if np.any(std < 0):
            raise ArgumentError("Standard deviations must be non-negative")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "std", std)

    @property
    def n_bands(self) -> int:
        return self.mean.size

    def to_dict(self) -> Dict[str, List[float]]:
        return {"mean": self.mean.tolist(), "std": self.std.tolist()}

    @staticmethod
    def from_dict(data: Dict[str, Sequence[float]]) -> "NormStats":
        return NormStats(mean=np.asarray(data["mean"]), std=np.asarray(data["std"]))


def compute_norm_stats(train_entries: Sequence[DatasetEntry], featurizer: PairFeaturizer) -> NormStats:
    """Mean and std per band over every frame of both channels of every training pair.

    Two passes over the (cached) spectrograms, so the result does not depend on
    the order of the entries beyond float rounding.

    Raises:
        ArgumentError: If ``train_entries`` is empty
    """
    if not train_entries:
        raise ArgumentError("Cannot estimate normalization statistics from an empty training set")
    pairs = featurizer.pairs([(e.ref_path, e.deg_path) for e in train_entries])

    n_bands = pairs[0].tensor.shape[1]
    total = np.zeros(n_bands)
    count = 0
    for pair in pairs:
        cells = pair.tensor.astype(np.float64)
        total += cells.sum(axis=(0, 2))
        count += cells.shape[0] * cells.shape[2]
    mean = total / count

    squared = np.zeros(n_bands)
    for pair in pairs:
        deviation = pair.tensor.astype(np.float64) - mean[np.newaxis, :, np.newaxis]
        squared += np.square(deviation).sum(axis=(0, 2))
    return NormStats(mean=mean, std=np.sqrt(squared / count))
