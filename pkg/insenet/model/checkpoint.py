"""Checkpoint container: weights, model spec, normalization statistics and training metadata."""

from __future__ import annotations

import pickle
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict

import torch

from ..errors import InsenetError
from ..frontend.gammatone import GammatoneConfig
from ..training.norm_stats import NormStats
from .network import InseNet, build_model
from .spec import ModelSpec

CHECKPOINT_FORMAT = "INSE-CKPT-1"


@dataclass
class Checkpoint:
    model: InseNet
    norm_stats: NormStats
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def spec(self) -> ModelSpec:
        return self.model.spec

    @property
    def gammatone_config(self) -> GammatoneConfig:
        """Frontend settings the model was trained with (defaults for older metadata)."""
        return GammatoneConfig(**self.metadata.get("gammatone", {}))


def save_checkpoint(path: str | Path, model: InseNet, norm_stats: NormStats, metadata: Dict[str, Any] | None = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    torch.save(
        {
            "format": CHECKPOINT_FORMAT,
            "state_dict": model.state_dict(),
            "model_spec": model.spec.to_json(),
            "norm_stats": norm_stats.to_dict(),
            "metadata": dict(metadata or {}),
        },
        path,
    )
    return path


def load_checkpoint(path: str | Path) -> Checkpoint:
    """Rebuild the network stored at ``path``, in eval mode.

    Raises:
        InsenetError: If the file is unreadable or not an INSE-CKPT-1 container
    """
    try:
        data = torch.load(str(path), map_location="cpu", weights_only=True)
    except (OSError, RuntimeError, EOFError, pickle.UnpicklingError) as e:
        raise InsenetError(f"Cannot read checkpoint {path}: {e}")
    if not isinstance(data, dict) or data.get("format") != CHECKPOINT_FORMAT:
        raise InsenetError(f"{path} is not a {CHECKPOINT_FORMAT} checkpoint")
    model = build_model(ModelSpec.from_json(data["model_spec"]))
    model.load_state_dict(data["state_dict"])
    model.eval()
    return Checkpoint(model=model, norm_stats=NormStats.from_dict(data["norm_stats"]), metadata=data["metadata"])
