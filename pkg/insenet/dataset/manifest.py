"""Dataset manifest: one CSV row per (reference, degraded, label) pair."""

from __future__ import annotations

import csv
import filecmp
import os
from collections import Counter
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Dict, Iterable, Optional, Tuple

import pandas as pd

from ..errors import ManifestError

MANIFEST_COLUMNS = ["ref_path", "deg_path", "label", "codec", "bitrate_kbps", "content_type", "excerpt_id"]
CONTENT_TYPES = ("music", "speech", "noise", "silence", "mixed")
SYNTHETIC_CONTENT = ("noise", "silence")
ANCHOR_CODECS = ("anchor_3k5", "anchor_7k")
SCHEMA_VERSION = "1"


@dataclass(frozen=True)
class DatasetEntry:
    ref_path: str
    deg_path: str
    label: float
    codec: str = "none"
    bitrate_kbps: Optional[int] = None
    content_type: str = "music"
    excerpt_id: str = ""

    def __post_init__(self):
        if not (1.0 <= self.label <= 5.0):
            raise ManifestError(f"Label {self.label} outside [1, 5] for {self.deg_path}")
        if not self.excerpt_id:
            raise ManifestError(f"Empty excerpt_id for {self.deg_path}")
        if self.content_type not in CONTENT_TYPES:
            raise ManifestError(f"Unknown content type '{self.content_type}' for {self.deg_path}")
        for path in (self.ref_path, self.deg_path):
            if "," in path:
                raise ManifestError(f"Paths containing commas are not supported: {path}")

    @property
    def is_ref_ref(self) -> bool:
        return self.deg_path == self.ref_path or self.codec == "none"

    @property
    def is_anchor(self) -> bool:
        return self.codec in ANCHOR_CODECS

    @property
    def is_synthetic(self) -> bool:
        return self.content_type in SYNTHETIC_CONTENT


def _same_audio(entry: DatasetEntry) -> bool:
    if entry.deg_path == entry.ref_path:
        return True
    return entry.codec == "none" and filecmp.cmp(entry.ref_path, entry.deg_path, shallow=False)


@dataclass(frozen=True)
class Manifest:
    entries: Tuple[DatasetEntry, ...] = ()
    schema_version: str = SCHEMA_VERSION

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def excerpt_ids(self) -> Tuple[str, ...]:
        return tuple(sorted({e.excerpt_id for e in self.entries}))

    def select(self, excerpt_ids: Iterable[str]) -> "Manifest":
        wanted = set(excerpt_ids)
        return replace(self, entries=tuple(e for e in self.entries if e.excerpt_id in wanted))

    def without_synthetic(self) -> "Manifest":
        return replace(self, entries=tuple(e for e in self.entries if not e.is_synthetic))

    @staticmethod
    def load(path: str | Path, *, check_paths: bool = True) -> "Manifest":
        """Read a manifest CSV.

        Relative paths are resolved against the manifest's directory. Ref-ref
        rows (same path, or codec "none" with identical files) get label 5.0.

        Raises:
            ManifestError: On a wrong header, invalid rows or missing files
        """
        path = Path(path)
        try:
            df = pd.read_csv(path, dtype=str, keep_default_na=False)
        except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
            raise ManifestError(f"Cannot read manifest {path}: {e}")
        if list(df.columns) != MANIFEST_COLUMNS:
            raise ManifestError(f"{path}: expected header {','.join(MANIFEST_COLUMNS)}, got {','.join(df.columns)}")

        base = path.parent
        entries = []
        for row_number, row in enumerate(df.itertuples(index=False), start=2):
            try:
                entry = DatasetEntry(
                    ref_path=_resolve(row.ref_path, base),
                    deg_path=_resolve(row.deg_path, base),
                    label=float(row.label),
                    codec=row.codec or "none",
                    bitrate_kbps=int(row.bitrate_kbps) if row.bitrate_kbps else None,
                    content_type=row.content_type,
                    excerpt_id=row.excerpt_id,
                )
            except ValueError as e:
                raise ManifestError(f"{path}, line {row_number}: {e}")
            if check_paths:
                for p in (entry.ref_path, entry.deg_path):
                    if not os.path.exists(p):
                        raise ManifestError(f"{path}, line {row_number}: file not found: {p}")
                if entry.label != 5.0 and _same_audio(entry):
                    entry = replace(entry, label=5.0)
            elif entry.deg_path == entry.ref_path:
                entry = replace(entry, label=5.0)
            entries.append(entry)
        return Manifest(entries=tuple(entries))

    def save(self, path: str | Path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        rows = [
            {
                "ref_path": e.ref_path,
                "deg_path": e.deg_path,
                "label": f"{e.label:.6g}",
                "codec": e.codec,
                "bitrate_kbps": "" if e.bitrate_kbps is None else str(e.bitrate_kbps),
                "content_type": e.content_type,
                "excerpt_id": e.excerpt_id,
            }
            for e in self.entries
        ]
        pd.DataFrame(rows, columns=MANIFEST_COLUMNS).to_csv(path, index=False, quoting=csv.QUOTE_NONE, encoding="utf-8")


def _resolve(p: str, base: Path) -> str:
    if not p:
        raise ValueError("empty path")
    return p if os.path.isabs(p) else str(base / p)


def manifest_composition(manifest: Manifest) -> Dict[str, int]:
    """Pair counts in the layout of the training-set composition table."""
    counts: Counter = Counter()
    for e in manifest:
        pair_kind = "ref-ref" if e.is_ref_ref else "ref-deg"
        source = "noise/silence" if e.is_synthetic else "music/speech"
        counts[f"{pair_kind} ({source})"] += 1
    return dict(sorted(counts.items()))
