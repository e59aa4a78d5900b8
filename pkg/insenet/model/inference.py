"""Scoring of (reference, degraded) WAV pairs with a trained checkpoint."""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..frontend.featurizer import PairFeaturizer
from ..frontend.pairing import normalize_pair
from .checkpoint import Checkpoint
from .network import forward_batch


def predict_pairs(
    checkpoint: Checkpoint,
    path_pairs: Sequence[Tuple[str, str]],
    featurizer: Optional[PairFeaturizer] = None,
    *,
    batch_size: int = 32
) -> np.ndarray:
    """MOS per pair, clamped to [1, 5].

    Pairs longer than one model window are split into consecutive windows and
    scored as the mean over windows.
    """
    featurizer = featurizer or PairFeaturizer(checkpoint.gammatone_config)
    windows = featurizer.windowed_pairs(path_pairs)
    flat = [normalize_pair(w, checkpoint.norm_stats) for pair_windows in windows for w in pair_windows]
    scores = forward_batch(flat, checkpoint.model, batch_size=batch_size)
    result: List[float] = []
    start = 0
    for pair_windows in windows:
        result.append(float(np.mean(scores[start:start + len(pair_windows)])))
        start += len(pair_windows)
    return np.asarray(result)
