"""Inception blocks with factorized rectangular kernels and squeeze-and-excitation gating."""

from __future__ import annotations

from typing import Dict

import torch
import torch.nn as nn

from ..errors import ShapeError
from .spec import BRANCHES, InceptionBlockSpec, SEBlockSpec


class ConvBN(nn.Module):
    """Convolution (with bias) followed by batch normalization and ReLU."""

    def __init__(self, in_channels: int, out_channels: int, kernel_size, stride, padding):
        super().__init__()
        self.conv = nn.Conv2d(in_channels, out_channels, kernel_size=kernel_size, stride=stride, padding=padding)
        self.bn = nn.BatchNorm2d(out_channels)
        self.relu = nn.ReLU(inplace=True)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.relu(self.bn(self.conv(x)))


class InceptionBlock(nn.Module):
    """Four parallel branches concatenated on the channel axis.

    The horizontal and vertical branches are factorized rectangular
    convolutions, the pointwise branch a 1x1 convolution, and the pooling
    branch average pooling with a 1x1 projection.
    """

    def __init__(self, spec: InceptionBlockSpec):
        super().__init__()
        self.spec = spec
        self.branches = nn.ModuleDict()
        for branch, ops in spec.branch_ops().items():
            modules = []
            channels = spec.in_channels
            for kind, kernel, stride, padding, out_channels in ops:
                if kind == "conv":
                    modules.append(ConvBN(channels, out_channels, kernel, stride, padding))
                    channels = out_channels
                else:
                    modules.append(nn.AvgPool2d(kernel_size=kernel, stride=stride, padding=padding))
            self.branches[branch] = nn.Sequential(*modules)

    def branch_outputs(self, x: torch.Tensor) -> Dict[str, torch.Tensor]:
        if x.dim() != 4 or x.shape[1] != self.spec.in_channels:
            raise ShapeError(f"{self.spec.name}: expected (batch, {self.spec.in_channels}, H, W), got {tuple(x.shape)}")
        return {branch: self.branches[branch](x) for branch in BRANCHES}

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        outputs = self.branch_outputs(x)
        return torch.cat([outputs[branch] for branch in BRANCHES], dim=1)


class SEBlock(nn.Module):
    """Squeeze-and-excitation: channel gates in (0, 1) from globally pooled features."""

    def __init__(self, spec: SEBlockSpec):
        super().__init__()
        self.spec = spec
        self.fc1 = nn.Linear(spec.channels, spec.bottleneck)
        self.relu = nn.ReLU(inplace=True)
        self.fc2 = nn.Linear(spec.bottleneck, spec.channels)

    def gates(self, x: torch.Tensor) -> torch.Tensor:
        if x.dim() != 4 or x.shape[1] != self.spec.channels:
            raise ShapeError(f"{self.spec.name}: expected (batch, {self.spec.channels}, H, W), got {tuple(x.shape)}")
        squeezed = x.mean(dim=(2, 3))
        return torch.sigmoid(self.fc2(self.relu(self.fc1(squeezed))))

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return x * self.gates(x)[:, :, None, None]

