"""Bitrate-ranking diagnostic: higher bitrates of one excerpt and codec should not score lower."""

from __future__ import annotations

from collections import defaultdict
from typing import Dict, List, Optional, Sequence, Tuple

from ..dataset.manifest import DatasetEntry

RANKING_TOLERANCE = 0.05


def ranking_groups(entries: Sequence[DatasetEntry], predictions: Sequence[float]) -> Dict[Tuple[str, str], List[float]]:
    """Predictions per (excerpt_id, codec), ordered by increasing bitrate.

    Entries without a bitrate (references, anchors) are left out.
    """
    grouped: Dict[Tuple[str, str], List[Tuple[int, float]]] = defaultdict(list)
    for entry, prediction in zip(entries, predictions):
        if entry.bitrate_kbps is None:
            continue
        grouped[(entry.excerpt_id, entry.codec)].append((entry.bitrate_kbps, float(prediction)))
    return {key: [p for _, p in sorted(values)] for key, values in sorted(grouped.items())}


def ranking_violation_rate(groups: Dict[Tuple[str, str], Sequence[float]], tau: float = RANKING_TOLERANCE) -> Optional[float]:
    """Fraction of adjacent bitrate steps whose score drops by more than ``tau``.

    Returns:
        The rate in [0, 1], or None when no group has two bitrates
    """
    pairs = 0
    violations = 0
    for scores in groups.values():
        for lower, higher in zip(scores[:-1], scores[1:]):
            pairs += 1
            if higher < lower - tau:
                violations += 1
    return violations / pairs if pairs else None
