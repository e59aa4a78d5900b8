"""GTSPEC1 binary container for spectrograms.

Layout (little endian): magic ``GTSPEC1``, uint32 n_bands, uint32 n_frames,
float64 frame hop (s), float64 db floor, n_bands float64 band centres,
then n_bands * n_frames float32 dB values in row-major order.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from ..errors import ArgumentError
from .gammatone import Spectrogram

MAGIC = b"GTSPEC1"
_HEADER = struct.Struct("<IIdd")


def save_spectrogram(path: str | Path, spectrogram: Spectrogram) -> None:
    n_bands, n_frames = spectrogram.values.shape
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(_HEADER.pack(n_bands, n_frames, spectrogram.frame_hop, spectrogram.db_floor))
        f.write(np.asarray(spectrogram.band_centers, dtype="<f8").tobytes())
        f.write(np.ascontiguousarray(spectrogram.values, dtype="<f4").tobytes())


def load_spectrogram(path: str | Path) -> Spectrogram:
    data = Path(path).read_bytes()
    if not data.startswith(MAGIC):
        raise ArgumentError(f"{path} is not a GTSPEC1 file")
    offset = len(MAGIC)
    n_bands, n_frames, frame_hop, db_floor = _HEADER.unpack_from(data, offset)
    offset += _HEADER.size
    expected = offset + 8 * n_bands + 4 * n_bands * n_frames
    if len(data) != expected:
        raise ArgumentError(f"{path}: truncated or oversized GTSPEC1 payload ({len(data)} bytes, expected {expected})")
    centers = np.frombuffer(data, dtype="<f8", count=n_bands, offset=offset).copy()
    offset += 8 * n_bands
    values = np.frombuffer(data, dtype="<f4", count=n_bands * n_frames, offset=offset)
    return Spectrogram(
        values=values.reshape(n_bands, n_frames).astype(np.float32),
        band_centers=centers,
        frame_hop=frame_hop,
        db_floor=db_floor,
    )
