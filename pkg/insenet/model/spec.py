"""Declarative network description.

A ModelSpec is plain data: it can be written into a checkpoint as JSON and
turned back into the same network. Layer shapes are checked here, before any
weights exist.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, replace
from typing import Dict, List, Tuple, Union

from ..errors import ModelConstructionError

BLOCK_KINDS = ("A", "B", "C")
PADDING_POLICIES = ("same", "valid")
BRANCHES = ("horizontal", "vertical", "pointwise", "pool")

# (kind, kernel, stride, padding, out_channels); out_channels is 0 for pooling
Op = Tuple[str, Tuple[int, int], Tuple[int, int], Tuple[int, int], int]


@dataclass(frozen=True)
class InceptionBlockSpec:
    name: str
    block_kind: str
    in_channels: int
    widths: Tuple[int, int, int, int]
    horizontal_kernel: Tuple[int, int]
    vertical_kernel: Tuple[int, int]
    stride: Tuple[int, int] = (1, 1)
    padding: str = "same"

    def __post_init__(self):
        if self.block_kind not in BLOCK_KINDS:
            raise ModelConstructionError(f"{self.name}: unknown block kind '{self.block_kind}'")
        if self.padding not in PADDING_POLICIES:
            raise ModelConstructionError(f"{self.name}: unknown padding policy '{self.padding}'")
        if self.in_channels < 1 or len(self.widths) != 4 or min(self.widths) < 1:
            raise ModelConstructionError(f"{self.name}: channel counts must be positive, got {self.in_channels} -> {self.widths}")
        for kernel in (self.horizontal_kernel, self.vertical_kernel):
            if min(kernel) < 1 or kernel[0] % 2 == 0 or kernel[1] % 2 == 0:
                raise ModelConstructionError(f"{self.name}: kernels must have odd positive sizes, got {kernel}")
            if self.padding == "valid" and min(kernel) < 3:
                raise ModelConstructionError(f"{self.name}: valid padding needs kernels of at least 3x3, got {kernel}")
        if min(self.stride) < 1:
            raise ModelConstructionError(f"{self.name}: stride must be positive, got {self.stride}")

    @property
    def out_channels(self) -> int:
        return sum(self.widths)

    def branch_ops(self) -> Dict[str, List[Op]]:
        """The operations of each branch; the stride sits on the last spatial op.

        Rectangular kernels are factorized into a (kh, 1) conv followed by a
        (1, kw) conv. Under "same" padding every branch keeps the input size
        up to the stride; under "valid" padding every branch shrinks the
        input like an unpadded 3x3 window.
        """
        width_h, width_v, width_p, width_pool = self.widths
        s = tuple(self.stride)
        one = (1, 1)
        ops: Dict[str, List[Op]] = {}
        for branch, (kh, kw), width in (
            ("horizontal", self.horizontal_kernel, width_h),
            ("vertical", self.vertical_kernel, width_v),
        ):
            if self.padding == "same":
                pad_h, pad_w = kh // 2, kw // 2
            else:
                pad_h, pad_w = (kh - 3) // 2, (kw - 3) // 2
            ops[branch] = [
                ("conv", (kh, 1), one, (pad_h, 0), width),
                ("conv", (1, kw), s, (0, pad_w), width),
            ]
        if self.padding == "same":
            ops["pointwise"] = [("conv", one, s, (0, 0), width_p)]
            ops["pool"] = [("pool", (5, 5), s, (2, 2), 0), ("conv", one, one, (0, 0), width_pool)]
        else:
            ops["pointwise"] = [("conv", one, one, (0, 0), width_p), ("pool", (3, 3), s, (0, 0), 0)]
            ops["pool"] = [("pool", (3, 3), s, (0, 0), 0), ("conv", one, one, (0, 0), width_pool)]
        return ops

    def output_size(self, height: int, width: int) -> Tuple[int, int]:
        """Spatial output size; every branch must agree.

        Raises:
            ModelConstructionError: If the branches disagree or the input is too small
        """
        sizes = {}
        for branch, ops in self.branch_ops().items():
            h, w = height, width
            for _, kernel, stride, padding, _ in ops:
                h = (h + 2 * padding[0] - kernel[0]) // stride[0] + 1
                w = (w + 2 * padding[1] - kernel[1]) // stride[1] + 1
            if h < 1 or w < 1:
                raise ModelConstructionError(f"{self.name}: input {height}x{width} too small for the {branch} branch")
            sizes[branch] = (h, w)
        if len(set(sizes.values())) != 1:
            raise ModelConstructionError(f"{self.name}: branch output sizes differ on a {height}x{width} input: {sizes}")
        return sizes["horizontal"]


@dataclass(frozen=True)
class SEBlockSpec:
    name: str
    channels: int
    reduction_ratio: int = 16

    def __post_init__(self):
        if self.channels < 1 or self.reduction_ratio < 1:
            raise ModelConstructionError(f"{self.name}: channels and reduction ratio must be positive")

    @property
    def bottleneck(self) -> int:
        return max(1, self.channels // self.reduction_ratio)


LayerSpec = Union[InceptionBlockSpec, SEBlockSpec]


@dataclass(frozen=True)
class ModelSpec:
    input_shape: Tuple[int, int, int] = (2, 32, 360)
    layers: Tuple[LayerSpec, ...] = ()
    pool_size: Tuple[int, int] = (4, 4)
    fc_widths: Tuple[int, ...] = (3200, 512)
    dropout: float = 0.5
    clamp: Tuple[float, float] = (1.0, 5.0)

    def __post_init__(self):
        if not (0.0 <= self.dropout < 1.0):
            raise ModelConstructionError(f"dropout must lie in [0, 1), got {self.dropout}")
        if self.clamp[0] >= self.clamp[1]:
            raise ModelConstructionError(f"Invalid clamp range {self.clamp}")
        if any(w < 1 for w in self.fc_widths):
            raise ModelConstructionError(f"Fully connected widths must be positive, got {self.fc_widths}")

    def layer_shapes(self) -> List[Tuple[str, Tuple[int, ...]]]:
        """Output shape (without batch axis) of every layer, in order.

        Raises:
            ModelConstructionError: Naming the first layer whose input does not fit
        """
        channels, height, width = self.input_shape
        shapes: List[Tuple[str, Tuple[int, ...]]] = []
        for layer in self.layers:
            if isinstance(layer, InceptionBlockSpec):
                if layer.in_channels != channels:
                    raise ModelConstructionError(f"{layer.name}: expects {layer.in_channels} input channels, gets {channels}")
                height, width = layer.output_size(height, width)
                channels = layer.out_channels
            elif layer.channels != channels:
                raise ModelConstructionError(f"{layer.name}: expects {layer.channels} channels, gets {channels}")
            shapes.append((layer.name, (channels, height, width)))
        shapes.append(("pool", (channels, *self.pool_size)))
        for i, width in enumerate((*self.fc_widths, 1), start=1):
            shapes.append((f"fc{i}", (width,)))
        return shapes

    @property
    def fc_in_features(self) -> int:
        channels = self.input_shape[0]
        for layer in self.layers:
            if isinstance(layer, InceptionBlockSpec):
                channels = layer.out_channels
        return channels * self.pool_size[0] * self.pool_size[1]

    def to_json(self) -> str:
        layers = []
        for layer in self.layers:
            kind = "inception" if isinstance(layer, InceptionBlockSpec) else "se"
            layers.append({"type": kind, **asdict(layer)})
        data = asdict(replace(self, layers=()))
        data["layers"] = layers
        return json.dumps(data, indent=2)

    @staticmethod
    def from_json(text: str) -> "ModelSpec":
        try:
            data = json.loads(text)
            layers = []
            for layer in data.pop("layers"):
                kind = layer.pop("type")
                if kind == "inception":
                    layers.append(InceptionBlockSpec(**{k: tuple(v) if isinstance(v, list) else v for k, v in layer.items()}))
                elif kind == "se":
                    layers.append(SEBlockSpec(**layer))
                else:
                    raise ModelConstructionError(f"Unknown layer type '{kind}'")
            return ModelSpec(layers=tuple(layers), **{k: tuple(v) if isinstance(v, list) else v for k, v in data.items()})
        except (KeyError, TypeError, json.JSONDecodeError) as e:
            raise ModelConstructionError(f"Invalid model spec: {e}")


def _scaled(width: int, scale: float) -> int:
    return max(1, int(round(width * scale)))


def default_model_spec(width_scale: float = 1.0, *, dropout: float = 0.5) -> ModelSpec:
    """The full network: two A blocks, B and C with SE gating between them.

    ``width_scale`` shrinks every branch and hidden FC width for small
    experiments; 1.0 gives the full-size network.
    """
    if width_scale <= 0:
        raise ModelConstructionError(f"width_scale must be positive, got {width_scale}")

    def widths(*values):
        return tuple(_scaled(v, width_scale) for v in values)

    a1 = InceptionBlockSpec("inception_a1", "A", 2, widths(64, 64, 64, 16), (3, 7), (7, 3), (2, 2))
    a2 = InceptionBlockSpec("inception_a2", "A", a1.out_channels, widths(64, 64, 64, 32), (3, 7), (7, 3), (1, 2))
    b = InceptionBlockSpec("inception_b", "B", a2.out_channels, widths(64, 64, 64, 64), (3, 5), (5, 3), (1, 2))
    c = InceptionBlockSpec("inception_c", "C", b.out_channels, widths(64, 64, 64, 64), (3, 3), (5, 5), (1, 2), "valid")
    return ModelSpec(
        layers=(
            a1,
            a2,
            SEBlockSpec("se1", a2.out_channels),
            b,
            SEBlockSpec("se2", b.out_channels),
            c,
            SEBlockSpec("se3", c.out_channels),
        ),
        fc_widths=(_scaled(3200, width_scale), _scaled(512, width_scale)),
        dropout=dropout,
    )


def miniature_model_spec() -> ModelSpec:
    """One 4-wide Inception block, 2x2 pooling and a single 64 -> 1 output layer."""
    block = InceptionBlockSpec("inception_a1", "A", 2, (4, 4, 4, 4), (3, 7), (7, 3), (2, 2))
    return ModelSpec(input_shape=(2, 8, 16), layers=(block,), pool_size=(2, 2), fc_widths=(), dropout=0.0)
