"""The quality network: Inception/SE feature stack, adaptive pooling and an FC regression head."""

from __future__ import annotations

import math
from typing import List, Sequence, Tuple

import numpy as np
import torch
import torch.nn as nn

from ..errors import NormalizationStateError, ShapeError
from ..frontend.pairing import PairedInput
from .layers import InceptionBlock, SEBlock
from .spec import InceptionBlockSpec, ModelSpec


class InseNet(nn.Module):
    def __init__(self, spec: ModelSpec):
        super().__init__()
        spec.layer_shapes()
        self.spec = spec
        self.features = nn.ModuleList([
            InceptionBlock(layer) if isinstance(layer, InceptionBlockSpec) else SEBlock(layer)
            for layer in spec.layers
        ])
        self.pool = nn.AdaptiveAvgPool2d(spec.pool_size)
        widths = (spec.fc_in_features, *spec.fc_widths, 1)
        self.head = nn.ModuleList([nn.Linear(a, b) for a, b in zip(widths[:-1], widths[1:])])
        self.dropout = nn.Dropout(spec.dropout)

    def _check_input(self, x: torch.Tensor) -> None:
        if x.dim() != 4 or tuple(x.shape[1:]) != tuple(self.spec.input_shape):
            raise ShapeError(f"Expected input of shape (batch, {', '.join(map(str, self.spec.input_shape))}), got {tuple(x.shape)}")

    def layer_outputs(self, x: torch.Tensor) -> List[Tuple[str, torch.Tensor]]:
        """Activations after every named layer, in order; the last one is the raw score."""
        self._check_input(x)
        outputs = []
        for layer, module in zip(self.spec.layers, self.features):
            x = module(x)
            outputs.append((layer.name, x))
        x = self.pool(x)
        outputs.append(("pool", x))
        x = torch.flatten(x, 1)
        for i, fc in enumerate(self.head, start=1):
            x = fc(x)
            if i < len(self.head):
                x = self.dropout(torch.relu(x))
            outputs.append((f"fc{i}", x))
        return outputs

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        """Unclamped scores, shape (batch,)."""
        return self.layer_outputs(x)[-1][1].squeeze(1)


def _init_weights(model: nn.Module) -> None:
    for module in model.modules():
        if isinstance(module, (nn.Conv2d, nn.Linear)):
            nn.init.kaiming_uniform_(module.weight, a=math.sqrt(5))
            nn.init.zeros_(module.bias)
        elif isinstance(module, nn.BatchNorm2d):
            nn.init.ones_(module.weight)
            nn.init.zeros_(module.bias)


def build_model(spec: ModelSpec, seed: int = 0) -> InseNet:
    """Construct and initialize a network; the weights depend only on ``spec`` and ``seed``.

    Raises:
        ModelConstructionError: If ``spec`` is shape-inconsistent (names the layer)
    """
    with torch.random.fork_rng(devices=[]):
        torch.manual_seed(seed)
        model = InseNet(spec)
        _init_weights(model)
    return model


def count_parameters(model: nn.Module) -> int:
    return sum(p.numel() for p in model.parameters() if p.requires_grad)


def stack_pairs(pairs: Sequence[PairedInput]) -> torch.Tensor:
    """Batch tensor from normalized pairs.

    Raises:
        NormalizationStateError: If any pair is not normalized
    """
    if any(not p.normalized for p in pairs):
        raise NormalizationStateError("Model inputs must be normalized with the training statistics")
    return torch.from_numpy(np.stack([p.tensor for p in pairs]).astype(np.float32))


def forward_batch(pairs: Sequence[PairedInput], model: InseNet, *, batch_size: int = 32) -> np.ndarray:
    """Clamped inference scores for many normalized pairs."""
    low, high = model.spec.clamp
    dtype = next(model.parameters()).dtype
    model.eval()
    scores = []
    with torch.no_grad():
        for start in range(0, len(pairs), batch_size):
            batch = stack_pairs(pairs[start:start + batch_size]).to(dtype)
            scores.append(model(batch).clamp(low, high).numpy().astype(np.float64))
    return np.concatenate(scores) if scores else np.zeros(0)


def forward(pair: PairedInput, model: InseNet) -> float:
    """MOS for one normalized pair, clamped to the model's output range.

    Raises:
        NormalizationStateError: If the pair is not normalized
        ShapeError: If the pair does not match the model's input shape
    """
    return float(forward_batch([pair], model)[0])
