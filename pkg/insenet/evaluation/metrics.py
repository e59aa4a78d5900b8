"""Correlation and error metrics between predicted and reference scores."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.stats

from ..errors import ArgumentError, UndefinedCorrelationError


@dataclass(frozen=True)
class CorrelationReport:
    group_key: str
    group_value: str
    n: int
    rp: float
    rs: float
    mse: float


def _as_pair(x: Sequence[float], y: Sequence[float]):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 1 or x.shape != y.shape:
        raise ArgumentError(f"Expected two 1-D sequences of equal length, got {x.shape} and {y.shape}")
    if x.size < 2:
        raise UndefinedCorrelationError(f"Correlation needs at least 2 samples, got {x.size}")
    return x, y


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Product-moment correlation coefficient.

    Raises:
        UndefinedCorrelationError: Fewer than 2 samples or a constant input
        ArgumentError: Lengths differ
    """
    x, y = _as_pair(x, y)
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise UndefinedCorrelationError("Correlation is undefined for a constant input")
    r = scipy.stats.pearsonr(x, y)[0]
    return float(np.clip(r, -1.0, 1.0))


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    """Pearson correlation of the average ranks (ties share the mean rank)."""
    x, y = _as_pair(x, y)
    return pearson(scipy.stats.rankdata(x), scipy.stats.rankdata(y))


def mse(predictions: Sequence[float], targets: Sequence[float]) -> float:
    p = np.asarray(predictions, dtype=np.float64)
    t = np.asarray(targets, dtype=np.float64)
    if p.shape != t.shape:
        raise ArgumentError(f"Shapes differ: {p.shape} vs {t.shape}")
    return float(np.mean(np.square(p - t))) if p.size else 0.0


def correlation_or_none(fn, x: Sequence[float], y: Sequence[float]) -> Optional[float]:
    """``fn(x, y)``, or None where the coefficient is undefined."""
    try:
        return fn(x, y)
    except UndefinedCorrelationError:
        return None
