from __future__ import annotations

import sys
from pathlib import Path
from typing import Any, Dict, Tuple

import click
from click.core import ParameterSource
from dotenv import load_dotenv

from .config import CliConfig, load_config
from .core import run_build_manifest, run_evaluate, run_predict, run_spectrogram, run_synth, run_train, tee_output
from .dataset.manifest import CONTENT_TYPES, Manifest
from .errors import InsenetError
from .evaluation.evaluate import GROUPINGS
from .synth.noise import NOISE_COLORS

DEFAULTS = CliConfig()


def _resolve_config(ctx: click.Context, config_file: Path | None, fields: Tuple[str, ...]) -> CliConfig:
    """Config file < environment < options given on the command line."""
    overrides: Dict[str, Any] = {
        name: ctx.params[name]
        for name in fields
        if ctx.get_parameter_source(name) == ParameterSource.COMMANDLINE
    }
    return load_config(config_file, overrides=overrides)


def _fail(e: Exception) -> None:
    click.echo(f"Error: {e}", err=True)
    sys.exit(1)


def common_options(f):
    f = click.option('--log-file', '-l', type=click.Path(dir_okay=False, path_type=Path), help='File to write a copy of the progress output to')(f)
    f = click.option('--workers', type=int, default=DEFAULTS.workers, show_default=True, help='Worker threads for audio processing and external tools')(f)
    f = click.option('--seed', type=int, default=DEFAULTS.seed, show_default=True, help='Random seed')(f)
    f = click.option('--config', 'config_file', type=click.Path(exists=True, dir_okay=False, path_type=Path), help='Config file with INSENET_ keys')(f)
    return f


def frontend_options(f):
    f = click.option('--window-ms', type=float, default=DEFAULTS.window_ms, show_default=True, help='Analysis window length')(f)
    f = click.option('--hop-ms', type=float, default=DEFAULTS.hop_ms, show_default=True, help='Frame hop (80 ms windows with 20 ms hop = 75% overlap)')(f)
    f = click.option('--n-bands', type=int, default=DEFAULTS.n_bands, show_default=True, help='Number of Gammatone bands')(f)
    return f


FRONTEND_FIELDS = ("window_ms", "hop_ms", "n_bands")
COMMON_FIELDS = ("seed", "workers")


@click.group()
@click.version_option(package_name="insenet")
def cli():
    """Intrusive quality assessment of coded audio with a Gammatone/Inception network"""
    load_dotenv()


@cli.command("spectrogram")
@click.argument('in_wav', type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.argument('out_file', type=click.Path(dir_okay=False, path_type=Path))
@common_options
@frontend_options
@click.pass_context
def spectrogram_cmd(ctx, in_wav: Path, out_file: Path, config_file: Path | None, seed: int, workers: int, log_file: Path | None, window_ms: float, hop_ms: float, n_bands: int):
    """Compute the Gammatone spectrogram of a 48 kHz WAV file and store it as GTSPEC1.

    Stereo input is downmixed to its mid signal first.
    """
    try:
        config = _resolve_config(ctx, config_file, COMMON_FIELDS + FRONTEND_FIELDS)
        with tee_output(log_file):
            run_spectrogram(in_wav, out_file, config)
    except (InsenetError, OSError, RuntimeError) as e:
        _fail(e)


@cli.command("synth")
@click.argument('out_dir', type=click.Path(file_okay=False, path_type=Path))
@click.option('--color', 'colors', multiple=True, type=click.Choice(NOISE_COLORS), default=NOISE_COLORS, show_default=True, help='Noise colors to generate')
@click.option('--per-color', type=int, default=1, show_default=True, help='Noise references per color (seeds seed, seed+1, ...)')
@click.option('--no-silence', is_flag=True, help='Do not generate the digital-silence pair')
@click.option('--coded', is_flag=True, help='Also code each reference with the AAC ladder (needs INSENET_CODEC_AAC)')
@click.option('--toy-excerpts', type=int, default=0, show_default=True, help='Also write a tone-plus-noise toy corpus with this many excerpts')
@common_options
@click.pass_context
def synth_cmd(ctx, out_dir: Path, colors: Tuple[str, ...], per_color: int, no_silence: bool, coded: bool, toy_excerpts: int, config_file: Path | None, seed: int, workers: int, log_file: Path | None):
    """Generate perceptually transparent noise/silence pairs labelled 5.0.

    Noise is high-passed at 10 kHz and scaled to -110 dBFS, below the
    -108 dBFS inaudibility threshold.
    """
    try:
        config = _resolve_config(ctx, config_file, COMMON_FIELDS)
        with tee_output(log_file):
            run_synth(out_dir, config, colors=colors, per_color=per_color, include_silence=not no_silence, coded=coded, toy_excerpts=toy_excerpts)
    except (InsenetError, OSError, RuntimeError) as e:
        _fail(e)


@cli.command("build-manifest")
@click.argument('reference_wavs', nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option('--out-dir', '-o', type=click.Path(file_okay=False, path_type=Path), help=f'Directory for excerpts, coded files and manifest.csv [default: INSENET_OUTPUT_DIR or {DEFAULTS.output_dir}]')
@click.option('--labels-csv', type=click.Path(exists=True, dir_okay=False, path_type=Path), help='Precomputed labels (ref_path,deg_path,mos) used when the oracle is unavailable')
@click.option('--content-type', type=click.Choice(CONTENT_TYPES), default="music", show_default=True)
@click.option('--no-anchors', is_flag=True, help='Do not add the 3.5 kHz and 7 kHz low-pass anchors')
@click.option('--merge', 'extra_manifests', multiple=True, type=click.Path(exists=True, dir_okay=False, path_type=Path), help='Manifest to append (e.g. from the synth command)')
@common_options
@click.pass_context
def build_manifest_cmd(ctx, reference_wavs: Tuple[Path, ...], out_dir: Path | None, labels_csv: Path | None, content_type: str, no_anchors: bool, extra_manifests: Tuple[Path, ...], config_file: Path | None, seed: int, workers: int, log_file: Path | None):
    """Segment references into 7.2 s excerpts, code them along each ladder and label every pair.

    Codecs are configured with INSENET_CODEC_<ID> command templates and
    INSENET_LADDER_<ID> bitrate lists; the oracle with INSENET_ORACLE.
    """
    try:
        config = _resolve_config(ctx, config_file, COMMON_FIELDS)
        with tee_output(log_file):
            run_build_manifest(
                reference_wavs,
                out_dir or Path(config.output_dir),
                config,
                labels_csv=labels_csv,
                content_type=content_type,
                include_anchors=not no_anchors,
                extra_manifests=extra_manifests,
            )
    except (InsenetError, OSError, RuntimeError) as e:
        _fail(e)


@cli.command("train")
@click.argument('manifest', type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option('--out-dir', '-o', type=click.Path(file_okay=False, path_type=Path), help=f'Directory for checkpoints and fold reports [default: INSENET_OUTPUT_DIR or {DEFAULTS.output_dir}]')
@click.option('--learning-rate', type=float, default=DEFAULTS.learning_rate, show_default=True)
@click.option('--batch-size', type=int, default=DEFAULTS.batch_size, show_default=True)
@click.option('--epochs', type=int, default=DEFAULTS.epochs, show_default=True)
@click.option('--k-folds', type=int, default=DEFAULTS.k_folds, show_default=True)
@click.option('--dropout', type=float, default=DEFAULTS.dropout, show_default=True)
@click.option('--beta', type=float, default=DEFAULTS.beta, show_default=True, help='Smooth-L1 transition point')
@click.option('--max-steps', type=int, default=None, help='Stop each fold after this many optimizer steps')
@click.option('--fold', 'folds', type=int, multiple=True, help='Run only these fold indices')
@click.option('--exclude-synthetic', is_flag=True, help='Drop noise/silence pairs from the training data')
@click.option('--width-scale', type=float, default=1.0, show_default=True, help='Scale all branch and hidden widths (smaller networks for quick experiments)')
@click.option('--init-checkpoint', type=click.Path(exists=True, dir_okay=False, path_type=Path), help='Fine-tune from this checkpoint (e.g. on synthetic pairs) instead of a fresh network')
@common_options
@frontend_options
@click.pass_context
def train_cmd(ctx, manifest: Path, out_dir: Path | None, learning_rate: float, batch_size: int, epochs: int, k_folds: int, dropout: float, beta: float, max_steps: int | None, folds: Tuple[int, ...], exclude_synthetic: bool, width_scale: float, init_checkpoint: Path | None, config_file: Path | None, seed: int, workers: int, log_file: Path | None, window_ms: float, hop_ms: float, n_bands: int):
    """Train with k-fold cross-validation (split by excerpt) and write one checkpoint per fold."""
    try:
        config = _resolve_config(ctx, config_file, COMMON_FIELDS + FRONTEND_FIELDS + ("learning_rate", "batch_size", "epochs", "k_folds", "dropout", "beta"))
        with tee_output(log_file):
            run_train(
                manifest,
                out_dir or Path(config.output_dir),
                config,
                max_steps=max_steps,
                folds=folds,
                exclude_synthetic=exclude_synthetic,
                width_scale=width_scale,
                init_checkpoint=init_checkpoint,
            )
    except (InsenetError, OSError, RuntimeError) as e:
        _fail(e)


@cli.command("predict")
@click.argument('checkpoint', type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.argument('pair', nargs=-1, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option('--manifest', type=click.Path(exists=True, dir_okay=False, path_type=Path), help='Score every pair of a manifest')
@click.option('--output', type=click.Path(dir_okay=False, path_type=Path), help='Also write the predictions to this file')
@common_options
@click.pass_context
def predict_cmd(ctx, checkpoint: Path, pair: Tuple[Path, ...], manifest: Path | None, output: Path | None, config_file: Path | None, seed: int, workers: int, log_file: Path | None):
    """Print 'deg_path<TAB>mos' for each (reference, degraded) pair.

    Pass REF DEG after the checkpoint, or --manifest. Long files are scored
    as the mean over 7.2 s windows; scores are clamped to [1, 5].
    """
    if manifest is None and len(pair) != 2:
        raise click.UsageError("Pass exactly one REF DEG pair or --manifest")
    if manifest is not None and pair:
        raise click.UsageError("Pass either a REF DEG pair or --manifest, not both")
    try:
        config = _resolve_config(ctx, config_file, COMMON_FIELDS)
        if manifest is not None:
            path_pairs = [(e.ref_path, e.deg_path) for e in Manifest.load(manifest)]
        else:
            path_pairs = [(str(pair[0]), str(pair[1]))]
        with tee_output(log_file):
            lines = [f"{deg}\t{mos:.4f}" for deg, mos in run_predict(checkpoint, path_pairs, config)]
            for line in lines:
                click.echo(line)
        if output is not None:
            output.parent.mkdir(parents=True, exist_ok=True)
            output.write_text("".join(line + "\n" for line in lines))
    except (InsenetError, OSError, RuntimeError) as e:
        _fail(e)


@cli.command("evaluate")
@click.argument('manifest', type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option('--checkpoint', type=click.Path(exists=True, dir_okay=False, path_type=Path), help='Checkpoint to score the manifest with')
@click.option('--predictions', type=click.Path(exists=True, dir_okay=False, path_type=Path), help="Predictions file written by 'insenet predict'")
@click.option('--grouping', 'groupings', multiple=True, type=click.Choice(GROUPINGS), default=("overall", "codec", "bitrate"), show_default=True)
@click.option('--no-anchors', is_flag=True, help='Do not add references and anchors to each codec/bitrate group')
@click.option('--subjective', type=click.Path(exists=True, dir_okay=False, path_type=Path), help='Subjective scores (deg_path,score) replacing the manifest labels')
@click.option('--report', type=click.Path(dir_okay=False, path_type=Path), help='Write the correlation report CSV here')
@common_options
@click.pass_context
def evaluate_cmd(ctx, manifest: Path, checkpoint: Path | None, predictions: Path | None, groupings: Tuple[str, ...], no_anchors: bool, subjective: Path | None, report: Path | None, config_file: Path | None, seed: int, workers: int, log_file: Path | None):
    """Correlation (Pearson, Spearman) and MSE of predictions against labels, per group."""
    if (checkpoint is None) == (predictions is None):
        raise click.UsageError("Pass exactly one of --checkpoint or --predictions")
    try:
        config = _resolve_config(ctx, config_file, COMMON_FIELDS)
        with tee_output(log_file):
            run_evaluate(
                manifest,
                config,
                checkpoint_path=checkpoint,
                predictions_path=predictions,
                groupings=groupings,
                include_anchors=not no_anchors,
                subjective_csv=subjective,
                out_csv=report,
            )
    except (InsenetError, OSError, RuntimeError) as e:
        _fail(e)


if __name__ == "__main__":
    cli()
