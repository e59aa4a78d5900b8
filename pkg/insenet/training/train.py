"""Cross-validated training of the quality network."""

from __future__ import annotations

import platform
import sys
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np
import torch

from ..dataset.folds import split_folds
from ..dataset.manifest import DatasetEntry, Manifest
from ..errors import ArgumentError, InsenetError
from ..evaluation.metrics import correlation_or_none, mse, pearson, spearman
from ..frontend.featurizer import PairFeaturizer
from ..frontend.gammatone import GammatoneConfig
from ..frontend.pairing import PAIR_FRAMES, normalize_pair
from ..model.checkpoint import load_checkpoint, save_checkpoint
from ..model.network import InseNet, build_model, stack_pairs
from ..model.spec import ModelSpec, default_model_spec
from .loss import DEFAULT_BETA, smooth_l1
from .norm_stats import NormStats, compute_norm_stats
from .report import write_fold_report


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 4e-5
    batch_size: int = 32
    epochs: int = 50
    beta: float = DEFAULT_BETA
    k_folds: int = 5
    seed: int = 0
    dropout: float = 0.5
    width_scale: float = 1.0
    # optional cap on optimizer steps per fold
    max_steps: Optional[int] = None
    # subset of fold indices to run; None runs all
    folds: Optional[Tuple[int, ...]] = None
    exclude_synthetic: bool = False
    workers: int = 1
    gammatone: GammatoneConfig = field(default_factory=GammatoneConfig)
    model_spec: Optional[ModelSpec] = None
    # checkpoint to fine-tune from; its layout and normalization statistics are kept
    init_checkpoint: Optional[str] = None

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ArgumentError(f"learning_rate must be positive, got {self.learning_rate}")
        if self.batch_size < 1:
            raise ArgumentError(f"batch_size must be at least 1, got {self.batch_size}")
        if self.epochs < 1:
            raise ArgumentError(f"epochs must be at least 1, got {self.epochs}")
        if self.max_steps is not None and self.max_steps < 1:
            raise ArgumentError(f"max_steps must be at least 1, got {self.max_steps}")

    def resolved_model_spec(self) -> ModelSpec:
        if self.model_spec is not None:
            return self.model_spec
        spec = default_model_spec(self.width_scale, dropout=self.dropout)
        return replace(spec, input_shape=(2, self.gammatone.n_bands, PAIR_FRAMES))


@dataclass
class FoldResult:
    fold_index: int
    train_loss: List[float] = field(default_factory=list)
    val_loss: List[Optional[float]] = field(default_factory=list)
    val_mse: List[Optional[float]] = field(default_factory=list)
    val_rp: List[Optional[float]] = field(default_factory=list)
    val_rs: List[Optional[float]] = field(default_factory=list)
    steps: int = 0
    checkpoint_path: Optional[str] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None

    @property
    def final_mse(self) -> Optional[float]:
        return self.val_mse[-1] if self.val_mse else None

    @property
    def final_rp(self) -> Optional[float]:
        return self.val_rp[-1] if self.val_rp else None

    @property
    def final_rs(self) -> Optional[float]:
        return self.val_rs[-1] if self.val_rs else None


def _batch_tensors(
    entries: Sequence[DatasetEntry], featurizer: PairFeaturizer, stats: NormStats, dtype: torch.dtype
) -> Tuple[torch.Tensor, torch.Tensor]:
    """Normalized inputs and labels for one training batch."""
    pairs = [normalize_pair(featurizer.pair(e.ref_path, e.deg_path), stats) for e in entries]
    x = stack_pairs(pairs).to(dtype)
    y = torch.tensor([e.label for e in entries], dtype=dtype)
    return x, y


def train_step(model: InseNet, optimizer: torch.optim.Optimizer, x: torch.Tensor, y: torch.Tensor, beta: float = DEFAULT_BETA) -> float:
    """One gradient update on a batch; returns the batch loss before the update."""
    model.train()
    optimizer.zero_grad()
    loss = smooth_l1(model(x), y, beta)
    loss.backward()
    optimizer.step()
    return float(loss.item())


def _validate(
    model: InseNet, entries: Sequence[DatasetEntry], featurizer: PairFeaturizer, stats: NormStats, config: TrainConfig
) -> Tuple[float, float, Optional[float], Optional[float]]:
    dtype = next(model.parameters()).dtype
    low, high = model.spec.clamp
    raw = []
    model.eval()
    with torch.no_grad():
        for start in range(0, len(entries), config.batch_size):
            pairs = [normalize_pair(featurizer.pair(e.ref_path, e.deg_path), stats) for e in entries[start:start + config.batch_size]]
            raw.append(model(stack_pairs(pairs).to(dtype)))
    raw_scores = torch.cat(raw)
    labels = torch.tensor([e.label for e in entries], dtype=dtype)
    val_loss = float(smooth_l1(raw_scores, labels, config.beta).item())
    predictions = raw_scores.clamp(low, high).double().numpy()
    targets = labels.double().numpy()
    return (
        val_loss,
        mse(predictions, targets),
        correlation_or_none(pearson, predictions, targets),
        correlation_or_none(spearman, predictions, targets),
    )


def _format(value: Optional[float]) -> str:
    return "n/a" if value is None else f"{value:.4f}"


def train_fold(
    fold_index: int,
    train_entries: Sequence[DatasetEntry],
    val_entries: Sequence[DatasetEntry],
    config: TrainConfig,
    featurizer: PairFeaturizer,
    *,
    checkpoint_path: str | Path | None = None
) -> FoldResult:
    """Train one model on ``train_entries`` and track metrics on ``val_entries``.

    Normalization statistics come from the training entries only, except when
    fine-tuning from ``config.init_checkpoint``: the network then keeps the
    statistics it was trained with.

    Raises:
        ArgumentError: If the initial checkpoint used other frontend settings
    """
    train_entries = list(train_entries)
    val_entries = list(val_entries)
    result = FoldResult(fold_index=fold_index)
    seed = config.seed * 1000 + fold_index
    if config.init_checkpoint is not None:
        initial = load_checkpoint(config.init_checkpoint)
        if initial.gammatone_config != config.gammatone:
            raise ArgumentError(f"{config.init_checkpoint} was trained with frontend settings {initial.gammatone_config}")
        print(f"Fine-tuning from {config.init_checkpoint}")
        stats = initial.norm_stats
        model = build_model(initial.spec, seed=seed)
        model.load_state_dict(initial.model.state_dict())
    else:
        stats = compute_norm_stats(train_entries, featurizer)
        model = build_model(config.resolved_model_spec(), seed=seed)
    if val_entries:
        featurizer.pairs([(e.ref_path, e.deg_path) for e in val_entries])

    dtype = next(model.parameters()).dtype
    torch.manual_seed(seed)
    optimizer = torch.optim.Adam(model.parameters(), lr=config.learning_rate, betas=(0.9, 0.999), eps=1e-8)

    for epoch in range(config.epochs):
        order = np.random.default_rng([config.seed, fold_index, epoch]).permutation(len(train_entries))
        total = 0.0
        seen = 0
        for start in range(0, len(order), config.batch_size):
            batch = [train_entries[i] for i in order[start:start + config.batch_size]]
            x, y = _batch_tensors(batch, featurizer, stats, dtype)
            total += train_step(model, optimizer, x, y, config.beta) * len(batch)
            seen += len(batch)
            result.steps += 1
            if config.max_steps is not None and result.steps >= config.max_steps:
                break
        result.train_loss.append(total / seen)
        if val_entries:
            val_loss, val_mse, val_rp, val_rs = _validate(model, val_entries, featurizer, stats, config)
        else:
            val_loss = val_mse = val_rp = val_rs = None
        result.val_loss.append(val_loss)
        result.val_mse.append(val_mse)
        result.val_rp.append(val_rp)
        result.val_rs.append(val_rs)
        print(
            f"Fold {fold_index} epoch {epoch + 1}/{config.epochs}: train_loss={result.train_loss[-1]:.4f} "
            f"val_loss={_format(val_loss)} val_mse={_format(val_mse)} val_rp={_format(val_rp)} val_rs={_format(val_rs)}"
        )
        if config.max_steps is not None and result.steps >= config.max_steps:
            print(f"Reached {config.max_steps} steps")
            break

    if checkpoint_path is not None:
        metadata = {
            "seed": config.seed,
            "fold": fold_index,
            "epochs": len(result.train_loss),
            "steps": result.steps,
            "learning_rate": config.learning_rate,
            "batch_size": config.batch_size,
            "beta": config.beta,
            "gammatone": asdict(config.gammatone),
            "platform": platform.platform(),
            "torch_version": str(torch.__version__),
            "init_checkpoint": None if config.init_checkpoint is None else str(config.init_checkpoint),
        }
        result.checkpoint_path = str(save_checkpoint(checkpoint_path, model, stats, metadata))
    return result


def train(
    manifest: Manifest,
    config: TrainConfig,
    out_dir: str | Path,
    *,
    featurizer: Optional[PairFeaturizer] = None
) -> List[FoldResult]:
    """K-fold cross-validated training; one checkpoint per fold plus fold reports.

    A failing fold is recorded with its error and the remaining folds still run.
    """
    out_dir = Path(out_dir)
    torch.use_deterministic_algorithms(True, warn_only=True)
    if config.exclude_synthetic:
        manifest = manifest.without_synthetic()
    featurizer = featurizer or PairFeaturizer(config.gammatone, workers=config.workers)

    folds = split_folds(manifest, k=config.k_folds, seed=config.seed)
    if config.folds is not None:
        unknown = set(config.folds) - {f.fold_index for f in folds}
        if unknown:
            raise ArgumentError(f"Unknown fold index(es): {sorted(unknown)}")
        folds = [f for f in folds if f.fold_index in config.folds]

    print(f"Training {len(folds)} fold(s) on {len(manifest)} pairs from {len(manifest.excerpt_ids)} excerpts")
    results: List[FoldResult] = []
    for fold in folds:
        print("=========================================")
        print(f"Fold {fold.fold_index}: {len(fold.train_ids)} training / {len(fold.val_ids)} validation excerpts")
        try:
            result = train_fold(
                fold.fold_index,
                manifest.select(fold.train_ids).entries,
                manifest.select(fold.val_ids).entries,
                config,
                featurizer,
                checkpoint_path=out_dir / "checkpoints" / f"fold_{fold.fold_index}.pt",
            )
        except (InsenetError, OSError, RuntimeError) as e:
            print(f"WARNING: fold {fold.fold_index} failed: {e}", file=sys.stderr)
            result = FoldResult(fold_index=fold.fold_index, error=str(e))
        results.append(result)

    write_fold_report(results, out_dir)
    return results
