"""Client for external encoder/decoder executables."""

from __future__ import annotations

import os
from pathlib import Path
from typing import Dict, List, Mapping

import numpy as np
import scipy.signal

from ..errors import CodecError, ConfigurationError
from ..frontend.audio import AudioBuffer, read_wav, to_mono, write_wav
from ..tools.run_external import render_command, run_external

MAX_ALIGNMENT_LAG = 4096


def align_to_reference(ref: np.ndarray, deg: np.ndarray, max_lag: int = MAX_ALIGNMENT_LAG) -> np.ndarray:
    """Compensate codec delay and match the reference length.

    The lag maximising the full-signal cross-correlation within ±max_lag is
    removed, then the result is trimmed or zero-padded to ``len(ref)``.
    """
    corr = scipy.signal.correlate(deg, ref, mode="full", method="fft")
    lags = scipy.signal.correlation_lags(deg.size, ref.size, mode="full")
    window = np.abs(lags) <= max_lag
    corr, lags = corr[window], lags[window]
    lag = 0 if not np.any(corr) else int(lags[np.argmax(corr)])
    if lag >= 0:
        shifted = deg[lag:]
    else:
        shifted = np.concatenate([np.zeros(-lag), deg])
    if shifted.size >= ref.size:
        return shifted[:ref.size]
    return np.concatenate([shifted, np.zeros(ref.size - shifted.size)])


class CodecClient:
    """Runs configured codec round trips (encode + decode to WAV).

    Each codec id maps to a command template with ``{input}``, ``{output}``
    and ``{bitrate}`` placeholders; the tool must write a decoded 48 kHz WAV
    to ``{output}``.
    """

    def __init__(self, commands: Mapping[str, str], ladders: Mapping[str, List[int]], *, timeout: int = 600):
        self.commands: Dict[str, str] = dict(commands)
        self.ladders: Dict[str, List[int]] = {k: list(v) for k, v in ladders.items()}
        self.timeout = timeout

    @property
    def codecs(self) -> List[str]:
        return sorted(self.commands)

    def encode_decode(self, ref_path: str | Path, codec_id: str, bitrate_kbps: int, workdir: str | Path) -> Path:
        """Round-trip a reference through a codec.

        Returns:
            Path of the decoded WAV, delay-aligned and length-matched to the reference

        Raises:
            ConfigurationError: Unknown codec, missing executable or bitrate off the ladder
            CodecError: The tool exited with a failure or timed out
        """
        template = self.commands.get(codec_id)
        if template is None:
            raise ConfigurationError(f"No command configured for codec '{codec_id}'")
        ladder = self.ladders.get(codec_id, [])
        if bitrate_kbps not in ladder:
            raise ConfigurationError(f"Bitrate {bitrate_kbps} kbps is not in the {codec_id} ladder {ladder}")

        ref_path = Path(ref_path)
        workdir = Path(workdir)
        workdir.mkdir(parents=True, exist_ok=True)
        stem = f"{ref_path.stem}_{codec_id}_{bitrate_kbps}k"
        raw_path = workdir / f"{stem}_decoded.wav"
        deg_path = workdir / f"{stem}.wav"

        argv = render_command(template, {"input": str(ref_path), "output": str(raw_path), "bitrate": str(bitrate_kbps)})
        result = run_external(argv, timeout=self.timeout)
        if result.timed_out:
            raise CodecError(f"{codec_id} timed out after {self.timeout} s on {ref_path}", result.output)
        if result.returncode != 0:
            raise CodecError(f"{codec_id} failed with exit code {result.returncode} on {ref_path}", result.output)
        if not raw_path.exists():
            raise CodecError(f"{codec_id} produced no output for {ref_path}", result.output)

        ref = read_wav(ref_path)
        decoded = read_wav(raw_path)
        if decoded.channels != ref.channels:
            decoded = to_mono(decoded)
            ref = to_mono(ref)
        aligned = np.stack([
            align_to_reference(r, d) for r, d in zip(ref.samples, decoded.samples)
        ])
        write_wav(deg_path, AudioBuffer(samples=aligned, sample_rate=ref.sample_rate))
        os.remove(raw_path)
        return deg_path
