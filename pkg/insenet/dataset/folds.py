"""Cross-validation folds split by excerpt, so no reference leaks across a split."""

from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, List

from sklearn.model_selection import KFold

from ..errors import ArgumentError
from .manifest import Manifest


@dataclass(frozen=True)
class FoldSplit:
    fold_index: int
    train_ids: FrozenSet[str]
    val_ids: FrozenSet[str]


def split_folds(manifest: Manifest, k: int = 5, seed: int = 0) -> List[FoldSplit]:
    """Shuffle excerpt ids with the seed and cut them into k contiguous blocks.

    The first ``n % k`` folds get one extra validation excerpt.

    Raises:
        ArgumentError: If k < 2 or there are fewer than k distinct excerpts
    """
    ids = list(manifest.excerpt_ids)
    if k < 2:
        raise ArgumentError(f"Need at least 2 folds, got {k}")
    if len(ids) < k:
        raise ArgumentError(f"Need at least {k} distinct excerpts for {k} folds, got {len(ids)}")
    kfold = KFold(n_splits=k, shuffle=True, random_state=seed)
    return [
        FoldSplit(
            fold_index=i,
            train_ids=frozenset(ids[j] for j in train_index),
            val_ids=frozenset(ids[j] for j in val_index),
        )
        for i, (train_index, val_index) in enumerate(kfold.split(ids))
    ]
