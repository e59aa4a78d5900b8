"""Training-set construction: excerpts, coded versions, anchors and labels."""

from __future__ import annotations

import sys
from dataclasses import dataclass
from multiprocessing.pool import ThreadPool
from pathlib import Path
from typing import List, Optional, Sequence

from ..errors import InsenetError
from ..frontend.audio import AudioBuffer, read_wav, to_mono, write_wav
from ..synth.filters import lowpass
from .codec import CodecClient
from .manifest import ANCHOR_CODECS, DatasetEntry, Manifest
from .oracle import REF_REF_LABEL, OracleClient
from .segment import EXCERPT_SECONDS, segment_excerpts

ANCHORS = dict(zip(ANCHOR_CODECS, (3500.0, 7000.0)))


@dataclass(frozen=True)
class _Job:
    excerpt_path: Path
    excerpt_id: str
    codec: str
    bitrate_kbps: Optional[int]


def build_manifest(
    reference_wavs: Sequence[str | Path],
    out_dir: str | Path,
    *,
    oracle: OracleClient,
    codec_client: Optional[CodecClient] = None,
    content_type: str = "music",
    include_anchors: bool = True,
    workers: int = 1,
    length_s: float = EXCERPT_SECONDS
) -> Manifest:
    """Segment references, code every excerpt along each ladder and label the pairs.

    Ref-ref rows are labelled 5.0 without consulting the oracle. Coded pairs
    and the 3.5/7 kHz low-pass anchors are labelled by the oracle; a pair that
    cannot be coded or labelled is skipped with a warning.
    """
    out_dir = Path(out_dir)
    excerpt_dir = out_dir / "excerpts"
    coded_dir = out_dir / "coded"

    entries: List[DatasetEntry] = []
    jobs: List[_Job] = []
    for wav in reference_wavs:
        wav = Path(wav)
        segments = segment_excerpts(to_mono(read_wav(wav)), length_s)
        print(f"{wav}: {len(segments)} excerpts")
        for i, segment in enumerate(segments):
            excerpt_id = f"{wav.stem}_{i:04d}"
            excerpt_path = excerpt_dir / f"{excerpt_id}.wav"
            write_wav(excerpt_path, segment)
            entries.append(DatasetEntry(
                ref_path=str(excerpt_path),
                deg_path=str(excerpt_path),
                label=REF_REF_LABEL,
                codec="none",
                content_type=content_type,
                excerpt_id=excerpt_id,
            ))
            if codec_client is not None:
                for codec_id in codec_client.codecs:
                    for bitrate in codec_client.ladders.get(codec_id, []):
                        jobs.append(_Job(excerpt_path, excerpt_id, codec_id, bitrate))
            if include_anchors:
                for anchor in ANCHORS:
                    jobs.append(_Job(excerpt_path, excerpt_id, anchor, None))

    def run(job: _Job) -> Optional[DatasetEntry]:
        try:
            if job.codec in ANCHORS:
                deg_path = coded_dir / f"{job.excerpt_id}_{job.codec}.wav"
                ref = read_wav(job.excerpt_path)
                write_wav(deg_path, lowpass(ref, ANCHORS[job.codec]))
            else:
                deg_path = codec_client.encode_decode(job.excerpt_path, job.codec, job.bitrate_kbps, coded_dir)
            label = oracle.label_with_oracle(job.excerpt_path, deg_path)
        except (InsenetError, OSError) as e:
            print(f"WARNING: skipping {job.excerpt_id} / {job.codec} {job.bitrate_kbps or ''}: {e}", file=sys.stderr)
            return None
        return DatasetEntry(
            ref_path=str(job.excerpt_path),
            deg_path=str(deg_path),
            label=label,
            codec=job.codec,
            bitrate_kbps=job.bitrate_kbps,
            content_type=content_type,
            excerpt_id=job.excerpt_id,
        )

    print(f"Processing {len(jobs)} coded pairs with {workers} worker(s)...")
    if workers > 1 and len(jobs) > 1:
        with ThreadPool(workers) as pool:
            results = pool.map(run, jobs)
    else:
        results = [run(job) for job in jobs]
    coded = [r for r in results if r is not None]
    print(f"Labelled {len(coded)} of {len(jobs)} pairs")
    return Manifest(entries=tuple(entries + coded))
