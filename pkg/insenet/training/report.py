"""Fold reports: per-epoch metrics CSV and a summary text."""

from __future__ import annotations

from pathlib import Path
from typing import TYPE_CHECKING, List, Sequence

import pandas as pd

if TYPE_CHECKING:
    from .train import FoldResult

REPORT_COLUMNS = ["fold", "epoch", "train_loss", "val_loss", "val_mse", "val_rp", "val_rs"]


def fold_report_frame(results: Sequence["FoldResult"]) -> pd.DataFrame:
    rows = []
    for r in results:
        for epoch, train_loss in enumerate(r.train_loss, start=1):
            rows.append({
                "fold": r.fold_index,
                "epoch": epoch,
                "train_loss": train_loss,
                "val_loss": r.val_loss[epoch - 1],
                "val_mse": r.val_mse[epoch - 1],
                "val_rp": r.val_rp[epoch - 1],
                "val_rs": r.val_rs[epoch - 1],
            })
    frame = pd.DataFrame(rows, columns=REPORT_COLUMNS)
    return frame.astype({c: float for c in REPORT_COLUMNS[2:]})


def summarize(results: Sequence["FoldResult"]) -> str:
    frame = fold_report_frame(results)
    lines: List[str] = ["Mean over folds per epoch:"]
    if frame.empty:
        lines.append("(no completed epochs)")
    else:
        per_epoch = frame.drop(columns="fold").groupby("epoch").mean()
        lines.append(per_epoch.to_string(float_format=lambda v: f"{v:.4f}"))
    lines.append("")
    lines.append("Final validation metrics per fold:")
    for r in results:
        if r.ok:
            lines.append(f"  fold {r.fold_index}: mse={r.final_mse} rp={r.final_rp} rs={r.final_rs} steps={r.steps} checkpoint={r.checkpoint_path}")
        else:
            lines.append(f"  fold {r.fold_index}: FAILED: {r.error}")
    lines.append("")
    lines.append("Runs are deterministic for a fixed seed on one platform; results may differ across hardware or library versions.")
    return "\n".join(lines) + "\n"


def write_fold_report(results: Sequence["FoldResult"], out_dir: str | Path) -> Path:
    """Write ``fold_report.csv`` and ``summary.txt`` into ``out_dir``; returns the CSV path."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "fold_report.csv"
    fold_report_frame(results).to_csv(csv_path, index=False)
    (out_dir / "summary.txt").write_text(summarize(results))
    return csv_path
