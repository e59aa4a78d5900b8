"""Perceptually transparent synthetic pairs (inaudible noise, digital silence), labelled 5."""

from __future__ import annotations

import shutil
import sys
from dataclasses import replace
from multiprocessing.pool import ThreadPool
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from ..dataset.codec import CodecClient
from ..dataset.manifest import DatasetEntry
from ..errors import InsenetError
from ..frontend.audio import AudioBuffer, write_wav
from .noise import NoiseSpec, generate_noise

SYNTHETIC_LABEL = 5.0
SYNTHETIC_SECONDS = 7.2
SYNTHETIC_HIGHPASS_HZ = 10000.0
# strictly below the -108 dBFS inaudibility threshold
SYNTHETIC_LEVEL_DB = -110.0
SYNTHETIC_CODEC = "aac"
SYNTHETIC_BITRATES = (80, 96, 128)


def _write(path: Path, audio: AudioBuffer) -> None:
    try:
        write_wav(path, audio)
    except (OSError, RuntimeError) as e:
        raise InsenetError(f"Failed to write {path}: {e}") from e


def _copy(src: Path, dst: Path) -> None:
    try:
        shutil.copyfile(src, dst)
    except OSError as e:
        raise InsenetError(f"Failed to copy {src} to {dst}: {e}") from e


def make_synthetic_pairs(
    specs: Sequence[NoiseSpec],
    include_silence: bool,
    out_dir: str | Path,
    *,
    codec_client: Optional[CodecClient] = None,
    codec_id: str = SYNTHETIC_CODEC,
    bitrates: Sequence[int] = SYNTHETIC_BITRATES,
    workers: int = 1
) -> List[DatasetEntry]:
    """Write 7.2 s noise/silence references and their transparent pairs.

    Noise is high-passed at 10 kHz and scaled below -108 dBFS. Every reference
    gets a self-pair (degraded side is a copy, codec "none"); when a codec
    client is given, each reference is also coded at ``bitrates``. All entries
    are labelled 5.0.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    references = []
    for spec in specs:
        spec = replace(
            spec,
            duration_s=SYNTHETIC_SECONDS,
            highpass_fc=spec.highpass_fc or SYNTHETIC_HIGHPASS_HZ,
            target_level_db=min(spec.target_level_db, SYNTHETIC_LEVEL_DB),
        )
        excerpt_id = f"noise-{spec.color}-{spec.seed}"
        ref_path = out_dir / f"{excerpt_id}.wav"
        _write(ref_path, generate_noise(spec))
        references.append((ref_path, excerpt_id, "noise"))
    if include_silence:
        ref_path = out_dir / "silence.wav"
        _write(ref_path, AudioBuffer(samples=np.zeros(int(round(SYNTHETIC_SECONDS * 48000)))))
        references.append((ref_path, "silence", "silence"))

    entries: List[DatasetEntry] = []
    for ref_path, excerpt_id, content_type in references:
        copy_path = out_dir / f"{excerpt_id}_copy.wav"
        _copy(ref_path, copy_path)
        entries.append(DatasetEntry(
            ref_path=str(ref_path),
            deg_path=str(copy_path),
            label=SYNTHETIC_LABEL,
            codec="none",
            content_type=content_type,
            excerpt_id=excerpt_id,
        ))

    if codec_client is None:
        return entries

    jobs = [(r, bitrate) for r in references for bitrate in bitrates]

    def run(job):
        (ref_path, excerpt_id, content_type), bitrate = job
        try:
            deg_path = codec_client.encode_decode(ref_path, codec_id, bitrate, out_dir / "coded")
        except InsenetError as e:
            print(f"WARNING: skipping {excerpt_id} at {bitrate} kbps: {e}", file=sys.stderr)
            return None
        return DatasetEntry(
            ref_path=str(ref_path),
            deg_path=str(deg_path),
            label=SYNTHETIC_LABEL,
            codec=codec_id,
            bitrate_kbps=bitrate,
            content_type=content_type,
            excerpt_id=excerpt_id,
        )

    print(f"Coding {len(jobs)} synthetic references...")
    if workers > 1 and len(jobs) > 1:
        with ThreadPool(workers) as pool:
            coded = pool.map(run, jobs)
    else:
        coded = [run(job) for job in jobs]
    return entries + [e for e in coded if e is not None]
