from __future__ import annotations

import os
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, List, Optional, Sequence, Tuple

import torch

from .config import CliConfig
from .dataset.build import build_manifest
from .dataset.codec import CodecClient
from .dataset.manifest import Manifest, manifest_composition
from .dataset.oracle import OracleClient
from .errors import ConfigurationError, InsenetError
from .evaluation.evaluate import evaluate, format_reports, load_predictions, load_subjective_scores, write_reports
from .evaluation.metrics import CorrelationReport
from .evaluation.ranking import ranking_groups, ranking_violation_rate
from .frontend.audio import read_wav, to_mono
from .frontend.featurizer import PairFeaturizer
from .frontend.gammatone import Spectrogram, gammatone_spectrogram
from .frontend.spectrogram_file import save_spectrogram
from .model.checkpoint import load_checkpoint
from .model.inference import predict_pairs
from .synth.noise import NoiseSpec
from .synth.pairs import SYNTHETIC_CODEC, make_synthetic_pairs
from .synth.toy import make_toy_manifest
from .training.train import FoldResult, TrainConfig, train


class TeeOutput:
    """Class that duplicates output to both console and log file."""
    def __init__(self, log_file_handle):
        self.stdout = sys.stdout
        self.log_file = log_file_handle

    def write(self, text):
        self.stdout.write(text)
        if self.log_file:
            self.log_file.write(text)
            self.log_file.flush()

    def flush(self):
        self.stdout.flush()
        if self.log_file:
            self.log_file.flush()


@contextmanager
def tee_output(log_file: str | Path | None) -> Iterator[None]:
    """Duplicate stdout into ``log_file`` for the duration of the block."""
    if log_file is None:
        yield
        return
    Path(log_file).parent.mkdir(parents=True, exist_ok=True)
    with open(log_file, "w") as f:
        original_stdout = sys.stdout
        sys.stdout = TeeOutput(f)
        try:
            yield
        finally:
            sys.stdout = original_stdout


def codec_client_from_config(config: CliConfig) -> CodecClient:
    return CodecClient(config.codec_commands, config.ladders)


def run_spectrogram(in_wav: str | Path, out_file: str | Path, config: CliConfig) -> Spectrogram:
    audio = read_wav(in_wav)
    if audio.channels == 2:
        print(f"Downmixing stereo file {in_wav} to mid signal")
    spectrogram = gammatone_spectrogram(to_mono(audio), config.gammatone_config())
    save_spectrogram(out_file, spectrogram)
    print(f"Wrote {spectrogram.n_bands}x{spectrogram.n_frames} spectrogram to {out_file}")
    return spectrogram


def run_synth(
    out_dir: str | Path,
    config: CliConfig,
    *,
    colors: Sequence[str],
    per_color: int = 1,
    include_silence: bool = True,
    coded: bool = False,
    toy_excerpts: int = 0
) -> Manifest:
    """Write synthetic transparent pairs (and optionally a toy corpus) plus their manifest."""
    out_dir = Path(out_dir)
    specs = [NoiseSpec(color=color, seed=config.seed + i) for color in colors for i in range(per_color)]
    codec_client = None
    if coded:
        if SYNTHETIC_CODEC not in config.codec_commands:
            raise ConfigurationError(f"Coded synthetic pairs need INSENET_CODEC_{SYNTHETIC_CODEC.upper()}")
        codec_client = codec_client_from_config(config)
    entries = make_synthetic_pairs(specs, include_silence, out_dir / "synthetic", codec_client=codec_client, workers=config.workers)
    if toy_excerpts:
        entries += list(make_toy_manifest(out_dir / "toy", n_excerpts=toy_excerpts, seed=config.seed).entries)
    manifest = Manifest(entries=tuple(entries))
    manifest.save(out_dir / "manifest.csv")
    _print_composition(manifest)
    print(f"Manifest written to {out_dir / 'manifest.csv'}")
    return manifest


def _print_composition(manifest: Manifest) -> None:
    print("=========================================")
    for kind, count in manifest_composition(manifest).items():
        print(f"{kind}: {count}")
    print("=========================================")


def run_build_manifest(
    reference_wavs: Sequence[str | Path],
    out_dir: str | Path,
    config: CliConfig,
    *,
    labels_csv: str | Path | None = None,
    content_type: str = "music",
    include_anchors: bool = True,
    extra_manifests: Sequence[str | Path] = ()
) -> Manifest:
    out_dir = Path(out_dir)
    oracle = OracleClient(config.oracle_command, labels_csv=labels_csv)
    if not oracle.available:
        raise ConfigurationError("No quality oracle configured: set INSENET_ORACLE or pass --labels-csv")
    codec_client = codec_client_from_config(config) if config.codec_commands else None
    if codec_client is None:
        print("WARNING: no codecs configured (INSENET_CODEC_<ID>); only references and anchors will be produced", file=sys.stderr)
    manifest = build_manifest(
        reference_wavs,
        out_dir,
        oracle=oracle,
        codec_client=codec_client,
        content_type=content_type,
        include_anchors=include_anchors,
        workers=config.workers,
    )
    entries = list(manifest.entries)
    for extra in extra_manifests:
        entries += list(Manifest.load(extra).entries)
    manifest = Manifest(entries=tuple(entries))
    manifest.save(out_dir / "manifest.csv")
    _print_composition(manifest)
    print(f"Manifest written to {out_dir / 'manifest.csv'}")
    return manifest


def run_train(
    manifest_path: str | Path,
    out_dir: str | Path,
    config: CliConfig,
    *,
    max_steps: Optional[int] = None,
    folds: Optional[Sequence[int]] = None,
    exclude_synthetic: bool = False,
    width_scale: float = 1.0,
    init_checkpoint: str | Path | None = None
) -> List[FoldResult]:
    """Cross-validated training from a manifest file.

    Raises:
        InsenetError: If every fold failed
    """
    torch.manual_seed(config.seed)
    manifest = Manifest.load(manifest_path)
    train_config = TrainConfig(
        learning_rate=config.learning_rate,
        batch_size=config.batch_size,
        epochs=config.epochs,
        beta=config.beta,
        k_folds=config.k_folds,
        seed=config.seed,
        dropout=config.dropout,
        width_scale=width_scale,
        max_steps=max_steps,
        folds=tuple(folds) if folds else None,
        exclude_synthetic=exclude_synthetic,
        workers=config.workers,
        gammatone=config.gammatone_config(),
        init_checkpoint=None if init_checkpoint is None else str(init_checkpoint),
    )
    print(f"Learning rate: {train_config.learning_rate}, batch size: {train_config.batch_size}, epochs: {train_config.epochs}, folds: {train_config.k_folds}")
    results = train(manifest, train_config, out_dir)
    failed = [r for r in results if not r.ok]
    print(f"Fold report written to {Path(out_dir) / 'fold_report.csv'}")
    if results and len(failed) == len(results):
        raise InsenetError(f"All {len(results)} fold(s) failed")
    return results


def run_predict(checkpoint_path: str | Path, path_pairs: Sequence[Tuple[str, str]], config: CliConfig) -> List[Tuple[str, float]]:
    checkpoint = load_checkpoint(checkpoint_path)
    featurizer = PairFeaturizer(checkpoint.gammatone_config, workers=config.workers)
    scores = predict_pairs(checkpoint, path_pairs, featurizer)
    return [(deg, float(score)) for (_, deg), score in zip(path_pairs, scores)]


@dataclass
class EvaluationResult:
    reports: List[CorrelationReport]
    ranking_violation_rate: Optional[float]


def run_evaluate(
    manifest_path: str | Path,
    config: CliConfig,
    *,
    checkpoint_path: str | Path | None = None,
    predictions_path: str | Path | None = None,
    groupings: Sequence[str] = ("overall",),
    include_anchors: bool = True,
    subjective_csv: str | Path | None = None,
    out_csv: str | Path | None = None
) -> EvaluationResult:
    if (checkpoint_path is None) == (predictions_path is None):
        raise ConfigurationError("Pass exactly one of --checkpoint or --predictions")
    manifest = Manifest.load(manifest_path)
    predictions = load_predictions(predictions_path) if predictions_path is not None else None
    checkpoint = load_checkpoint(checkpoint_path) if checkpoint_path is not None else None
    featurizer = PairFeaturizer(checkpoint.gammatone_config, workers=config.workers) if checkpoint else None
    subjective = load_subjective_scores(subjective_csv) if subjective_csv is not None else None

    if predictions is None:
        scores = predict_pairs(checkpoint, [(e.ref_path, e.deg_path) for e in manifest], featurizer)
        predictions = {os.path.abspath(e.deg_path): float(s) for e, s in zip(manifest, scores)}
    reports = evaluate(
        checkpoint,
        manifest,
        groupings,
        include_anchors=include_anchors,
        subjective_scores=subjective,
        predictions=predictions,
    )
    print(format_reports(reports))
    rate = ranking_violation_rate(ranking_groups(manifest.entries, [predictions[os.path.abspath(e.deg_path)] for e in manifest]))
    print(f"Bitrate ranking violation rate: {'n/a' if rate is None else f'{rate:.4f}'}")
    if out_csv is not None:
        write_reports(reports, out_csv)
        print(f"Report written to {out_csv}")
    return EvaluationResult(reports=reports, ranking_violation_rate=rate)
