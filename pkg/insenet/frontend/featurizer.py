"""Turns (reference, degraded) WAV paths into paired model inputs."""

from __future__ import annotations

import sys
import threading
from multiprocessing.pool import ThreadPool
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .audio import read_wav, to_mono
from .gammatone import GammatoneConfig, Spectrogram, gammatone_spectrogram
from .pairing import PAIR_FRAMES, PairedInput, pair_spectrograms, window_pairs


class PairFeaturizer:
    """Computes and caches Gammatone spectrograms per audio file.

    Stereo files are scored on their mid downmix. The cache is keyed by the
    resolved path, so a reference shared by many degraded versions is only
    analysed once.
    """

    def __init__(self, config: Optional[GammatoneConfig] = None, *, workers: int = 1, n_frames: int = PAIR_FRAMES):
        self.config = config or GammatoneConfig()
        self.workers = max(1, workers)
        self.n_frames = n_frames
        self._cache: Dict[str, Spectrogram] = {}
        self._lock = threading.Lock()

    def spectrogram(self, path: str | Path) -> Spectrogram:
        key = str(Path(path).resolve())
        with self._lock:
            cached = self._cache.get(key)
        if cached is not None:
            return cached
        audio = read_wav(path)
        if audio.channels == 2:
            print(f"Downmixing stereo file {path} to mid signal", file=sys.stderr)
        spectrogram = gammatone_spectrogram(to_mono(audio), self.config)
        with self._lock:
            self._cache[key] = spectrogram
        return spectrogram

    def pair(self, ref_path: str | Path, deg_path: str | Path) -> PairedInput:
        return pair_spectrograms(self.spectrogram(ref_path), self.spectrogram(deg_path), n_frames=self.n_frames)

    def windows(self, ref_path: str | Path, deg_path: str | Path) -> List[PairedInput]:
        return window_pairs(self.spectrogram(ref_path), self.spectrogram(deg_path), n_frames=self.n_frames)

    def pairs(self, path_pairs: Sequence[Tuple[str, str]]) -> List[PairedInput]:
        """Featurize many pairs, in parallel when ``workers`` > 1."""
        print(f"Computing spectrograms for {len(path_pairs)} pairs...")
        return self._map(lambda p: self.pair(*p), path_pairs)

    def windowed_pairs(self, path_pairs: Sequence[Tuple[str, str]]) -> List[List[PairedInput]]:
        return self._map(lambda p: self.windows(*p), path_pairs)

    def _map(self, fn, items: Iterable):
        items = list(items)
        if self.workers == 1 or len(items) < 2:
            return [fn(item) for item in items]
        with ThreadPool(self.workers) as pool:
            return pool.map(fn, items)
