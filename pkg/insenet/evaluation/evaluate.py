"""Grouped correlation reports of predicted against reference scores."""

from __future__ import annotations

import os
import sys
from collections import defaultdict
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence

import numpy as np
import pandas as pd

from ..dataset.manifest import DatasetEntry, Manifest
from ..errors import ArgumentError, ManifestError, UndefinedCorrelationError
from ..frontend.featurizer import PairFeaturizer
from ..model.checkpoint import Checkpoint
from ..model.inference import predict_pairs
from .metrics import CorrelationReport, mse, pearson, spearman

GROUPINGS = ("overall", "codec", "bitrate", "content_type", "excerpt")
REPORT_COLUMNS = ["group_key", "group_value", "n", "rp", "rs", "mse"]


def _key(path: str) -> str:
    return os.path.abspath(path)


def load_subjective_scores(path: str | Path) -> Dict[str, float]:
    """Read ``deg_path,score`` rows (e.g. MUSHRA 0-100), keyed by absolute degraded path."""
    path = Path(path)
    try:
        df = pd.read_csv(path, dtype={"deg_path": str, "score": float})
    except (OSError, ValueError) as e:
        raise ManifestError(f"Cannot read subjective scores {path}: {e}")
    if list(df.columns) != ["deg_path", "score"]:
        raise ManifestError(f"{path}: expected header deg_path,score")
    return {
        _key(p if os.path.isabs(p) else str(path.parent / p)): float(s)
        for p, s in zip(df["deg_path"], df["score"])
    }


def load_predictions(path: str | Path) -> Dict[str, float]:
    """Read ``deg_path<TAB>mos`` lines as written by the predict command."""
    scores = {}
    for line_number, line in enumerate(Path(path).read_text().splitlines(), start=1):
        if not line.strip():
            continue
        try:
            deg_path, mos = line.rsplit("\t", 1)
            scores[_key(deg_path)] = float(mos)
        except ValueError:
            raise ManifestError(f"{path}, line {line_number}: expected 'deg_path<TAB>mos'")
    return scores


def _is_coded(entry: DatasetEntry) -> bool:
    return not entry.is_ref_ref and not entry.is_anchor


def group_entries(entries: Sequence[DatasetEntry], grouping: str, *, include_anchors: bool = True) -> Dict[str, List[int]]:
    """Indices of the entries in each group of a grouping.

    Codec and bitrate groups hold coded entries; with ``include_anchors`` the
    reference and anchor entries of every excerpt in a group are added to it.
    """
    if grouping not in GROUPINGS:
        raise ArgumentError(f"Unknown grouping '{grouping}', expected one of {GROUPINGS}")
    groups: Dict[str, List[int]] = defaultdict(list)
    if grouping == "overall":
        groups["all"] = list(range(len(entries)))
        return dict(groups)
    if grouping in ("content_type", "excerpt"):
        for i, e in enumerate(entries):
            groups[e.content_type if grouping == "content_type" else e.excerpt_id].append(i)
        return dict(groups)

    for i, e in enumerate(entries):
        if not _is_coded(e):
            continue
        if grouping == "codec":
            groups[e.codec].append(i)
        elif e.bitrate_kbps is not None:
            groups[f"{e.codec}@{e.bitrate_kbps}"].append(i)
    if include_anchors:
        extras: Dict[str, List[int]] = defaultdict(list)
        for i, e in enumerate(entries):
            if not _is_coded(e):
                extras[e.excerpt_id].append(i)
        for members in groups.values():
            for excerpt_id in sorted({entries[i].excerpt_id for i in members}):
                members.extend(extras.get(excerpt_id, []))
    return dict(groups)


def build_reports(
    entries: Sequence[DatasetEntry],
    predictions: Sequence[float],
    labels: Sequence[float],
    groupings: Sequence[str] = ("overall",),
    *,
    include_anchors: bool = True
) -> List[CorrelationReport]:
    """One report per group of every grouping; groups with an undefined correlation are skipped with a warning.

    Members of a group are ordered by path before computing, so permuting the
    rows gives identical reports.
    """
    if not (len(entries) == len(predictions) == len(labels)):
        raise ArgumentError("entries, predictions and labels must have equal lengths")
    predictions = np.asarray(predictions, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    reports = []
    for grouping in groupings:
        groups = group_entries(entries, grouping, include_anchors=include_anchors)
        for value in sorted(groups):
            members = sorted(groups[value], key=lambda i: (entries[i].deg_path, entries[i].ref_path))
            p, t = predictions[members], labels[members]
            try:
                reports.append(CorrelationReport(
                    group_key=grouping,
                    group_value=value,
                    n=len(members),
                    rp=pearson(p, t),
                    rs=spearman(p, t),
                    mse=mse(p, t),
                ))
            except UndefinedCorrelationError as e:
                print(f"WARNING: skipping {grouping}={value} (n={len(members)}): {e}", file=sys.stderr)
    return reports


def evaluate(
    checkpoint: Optional[Checkpoint],
    manifest: Manifest,
    groupings: Sequence[str] = ("overall",),
    *,
    include_anchors: bool = True,
    subjective_scores: Optional[Mapping[str, float]] = None,
    predictions: Optional[Mapping[str, float]] = None,
    featurizer: Optional[PairFeaturizer] = None
) -> List[CorrelationReport]:
    """Score the manifest with the checkpoint (or use given predictions) and build the reports.

    Labels are the manifest labels, or the subjective scores when given; these
    must then cover every entry so one scale is used throughout.

    Raises:
        ManifestError: If a prediction or subjective score is missing for an entry
    """
    entries = list(manifest.entries)
    if subjective_scores is None:
        labels = [e.label for e in entries]
    else:
        uncovered = [e.deg_path for e in entries if _key(e.deg_path) not in subjective_scores]
        if uncovered:
            raise ManifestError(f"No subjective score for {len(uncovered)} pair(s), e.g. {uncovered[0]}")
        labels = [subjective_scores[_key(e.deg_path)] for e in entries]

    if predictions is None:
        if checkpoint is None:
            raise ArgumentError("Either a checkpoint or predictions are required")
        print(f"Scoring {len(entries)} pairs...")
        scores = predict_pairs(checkpoint, [(e.ref_path, e.deg_path) for e in entries], featurizer)
    else:
        missing = [e.deg_path for e in entries if _key(e.deg_path) not in predictions]
        if missing:
            raise ManifestError(f"No prediction for {len(missing)} pair(s), e.g. {missing[0]}")
        scores = [predictions[_key(e.deg_path)] for e in entries]

    return build_reports(entries, scores, labels, groupings, include_anchors=include_anchors)


def reports_frame(reports: Sequence[CorrelationReport]) -> pd.DataFrame:
    return pd.DataFrame([vars(r) for r in reports], columns=REPORT_COLUMNS)


def write_reports(reports: Sequence[CorrelationReport], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    reports_frame(reports).to_csv(path, index=False)
    return path


def format_reports(reports: Sequence[CorrelationReport]) -> str:
    if not reports:
        return "(no reports)"
    return reports_frame(reports).to_string(index=False, float_format=lambda v: f"{v:.4f}")
