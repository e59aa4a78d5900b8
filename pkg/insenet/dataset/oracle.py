"""Client for the external quality oracle that produces MOS labels."""

from __future__ import annotations

import os
import re
from pathlib import Path
from typing import Dict, Optional, Tuple

import numpy as np
import pandas as pd

from ..errors import LabelingError, ManifestError
from ..frontend.audio import read_wav
from ..tools.run_external import render_command, run_external

REF_REF_LABEL = 5.0
_NUMBER = re.compile(r"[-+]?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][-+]?\d+)?")


def parse_mos(stdout: str) -> Optional[float]:
    """The last numeric token of the oracle's standard output."""
    tokens = _NUMBER.findall(stdout)
    return float(tokens[-1]) if tokens else None


def load_labels_csv(path: str | Path) -> Dict[Tuple[str, str], float]:
    """Read precomputed labels (``ref_path,deg_path,mos``), keyed by absolute paths."""
    path = Path(path)
    df = pd.read_csv(path, dtype={"ref_path": str, "deg_path": str, "mos": float})
    if list(df.columns) != ["ref_path", "deg_path", "mos"]:
        raise ManifestError(f"{path}: expected header ref_path,deg_path,mos")
    base = path.parent
    return {
        (_absolute(r, base), _absolute(d, base)): float(m)
        for r, d, m in zip(df["ref_path"], df["deg_path"], df["mos"])
    }


def _absolute(p: str | Path, base: Path | None = None) -> str:
    p = str(p)
    if base is not None and not os.path.isabs(p):
        p = str(base / p)
    return os.path.abspath(p)


def _identical_audio(ref_path: str | Path, deg_path: str | Path) -> bool:
    if _absolute(ref_path) == _absolute(deg_path):
        return True
    ref = read_wav(ref_path)
    deg = read_wav(deg_path)
    return ref.samples.shape == deg.samples.shape and np.array_equal(ref.samples, deg.samples)


class OracleClient:
    """Labels (reference, degraded) pairs with an external objective metric.

    The command template takes ``{ref}`` and ``{deg}`` placeholders; the MOS is
    the last number printed on stdout. A labels CSV serves as fallback.
    """

    def __init__(self, command: Optional[str] = None, *, labels_csv: str | Path | None = None, timeout: int = 600):
        self.command = command
        self.labels = load_labels_csv(labels_csv) if labels_csv else {}
        self.timeout = timeout

    @property
    def available(self) -> bool:
        return bool(self.command) or bool(self.labels)

    def label_with_oracle(self, ref_path: str | Path, deg_path: str | Path) -> float:
        """MOS in [1, 5] for a pair; identical audio is always 5.0.

        Raises:
            LabelingError: If neither the oracle nor the labels CSV can label the pair
        """
        if _identical_audio(ref_path, deg_path):
            return REF_REF_LABEL

        problems = []
        if self.command:
            argv = render_command(self.command, {"ref": str(ref_path), "deg": str(deg_path)})
            result = run_external(argv, timeout=self.timeout)
            mos = parse_mos(result.stdout) if result.returncode == 0 and not result.timed_out else None
            if mos is not None:
                return float(np.clip(mos, 1.0, 5.0))
            problems.append(f"oracle failed (exit code {result.returncode})\n{result.output}")

        key = (_absolute(ref_path), _absolute(deg_path))
        if key in self.labels:
            return float(np.clip(self.labels[key], 1.0, 5.0))
        if not self.available:
            problems.append("no oracle command configured and no labels CSV supplied")
        else:
            problems.append("pair not found in labels CSV")
        raise LabelingError(f"Cannot label {deg_path}: " + "; ".join(problems))
