"""Smooth-L1 regression loss."""

from __future__ import annotations

import torch
import torch.nn.functional as F

from ..errors import ArgumentError

DEFAULT_BETA = 1.0


def smooth_l1(pred: torch.Tensor, target: torch.Tensor, beta: float = DEFAULT_BETA) -> torch.Tensor:
    """Batch mean of 0.5 d^2 / beta for |d| < beta and |d| - 0.5 beta otherwise, d = pred - target."""
    if beta <= 0:
        raise ArgumentError(f"beta must be positive, got {beta}")
    return F.smooth_l1_loss(pred, target, reduction="mean", beta=beta)
