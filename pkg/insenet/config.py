"""Run configuration: built-in defaults, config files, environment and CLI flags.

Precedence is CLI flag > environment variable > config file > default. Config
files use dotenv syntax (``KEY=value`` lines) and may only contain known
``INSENET_`` keys.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional

from dotenv import dotenv_values

from .errors import ConfigurationError

ENV_PREFIX = "INSENET_"

# Codec ladders used to build the training set (kbps)
DEFAULT_LADDERS: Dict[str, List[int]] = {
    "heaac": [16, 20, 24, 32, 40, 48],
    "aac": [80, 96, 128],
}

_CODEC_KEY = re.compile(r"^INSENET_CODEC_([A-Z0-9]+)$")
_LADDER_KEY = re.compile(r"^INSENET_LADDER_([A-Z0-9]+)$")


@dataclass(frozen=True)
class CliConfig:
    oracle_command: Optional[str] = None
    codec_commands: Dict[str, str] = field(default_factory=dict)
    ladders: Dict[str, List[int]] = field(default_factory=lambda: {k: list(v) for k, v in DEFAULT_LADDERS.items()})
    workers: int = max(1, os.cpu_count() or 1)
    seed: int = 0
    output_dir: str = "insenet_output"
    # training
    learning_rate: float = 4e-5
    batch_size: int = 32
    epochs: int = 50
    k_folds: int = 5
    dropout: float = 0.5
    beta: float = 1.0
    # frontend
    window_ms: float = 80.0
    hop_ms: float = 20.0
    n_bands: int = 32
    f_min: float = 50.0
    f_max: float = 24000.0
    db_floor: float = -120.0
    filter_order: int = 4

    def gammatone_config(self):
        from .frontend.gammatone import GammatoneConfig
        return GammatoneConfig(
            window_ms=self.window_ms,
            hop_ms=self.hop_ms,
            n_bands=self.n_bands,
            f_min=self.f_min,
            f_max=self.f_max,
            db_floor=self.db_floor,
            filter_order=self.filter_order,
        )


_SCALAR_KEYS = {
    f"{ENV_PREFIX}{f.name.upper()}": f.name
    for f in fields(CliConfig)
    if f.name not in ("oracle_command", "codec_commands", "ladders")
}
_SCALAR_KEYS[f"{ENV_PREFIX}ORACLE"] = "oracle_command"


def _is_known_key(key: str) -> bool:
    return key in _SCALAR_KEYS or bool(_CODEC_KEY.match(key)) or bool(_LADDER_KEY.match(key))


def _parse_ladder(key: str, value: str) -> List[int]:
    try:
        ladder = sorted(int(v) for v in value.split(",") if v.strip())
    except ValueError:
        raise ConfigurationError(f"{key}: expected a comma-separated list of kbps values, got '{value}'")
    if not ladder:
        raise ConfigurationError(f"{key}: empty bitrate ladder")
    return ladder


def _apply(settings: Dict[str, Any], key: str, value: str) -> None:
    codec_match = _CODEC_KEY.match(key)
    ladder_match = _LADDER_KEY.match(key)
    if codec_match:
        settings["codec_commands"][codec_match.group(1).lower()] = value
        return
    if ladder_match:
        settings["ladders"][ladder_match.group(1).lower()] = _parse_ladder(key, value)
        return
    name = _SCALAR_KEYS[key]
    default = getattr(CliConfig(), name)
    try:
        if name == "oracle_command":
            settings[name] = value
        elif isinstance(default, int):
            settings[name] = int(value)
        elif isinstance(default, float):
            settings[name] = float(value)
        else:
            settings[name] = value
    except ValueError:
        raise ConfigurationError(f"{key}: invalid value '{value}'")


def load_config(
    config_file: str | Path | None = None,
    *,
    environ: Mapping[str, str] | None = None,
    overrides: Mapping[str, Any] | None = None
) -> CliConfig:
    """Resolve the run configuration.

    Args:
        config_file: Optional dotenv-style file with INSENET_ keys
        environ: Environment to read (defaults to os.environ)
        overrides: Values given explicitly on the command line, keyed by
            CliConfig field name

    Returns:
        The resolved CliConfig

    Raises:
        ConfigurationError: On unknown keys in the config file or unparsable values
    """
    base = CliConfig()
    settings: Dict[str, Any] = {f.name: getattr(base, f.name) for f in fields(CliConfig)}
    settings["codec_commands"] = dict(base.codec_commands)
    settings["ladders"] = {k: list(v) for k, v in base.ladders.items()}

    if config_file is not None:
        values = dotenv_values(config_file)
        for key, value in values.items():
            if not _is_known_key(key):
                raise ConfigurationError(f"Unknown key '{key}' in config file {config_file}")
            if value is not None:
                _apply(settings, key, value)

    env = os.environ if environ is None else environ
    for key, value in env.items():
        if key.startswith(ENV_PREFIX) and _is_known_key(key):
            _apply(settings, key, value)

    config = CliConfig(**settings)
    if overrides:
        unknown = set(overrides) - set(settings)
        if unknown:
            raise ConfigurationError(f"Unknown configuration field(s): {', '.join(sorted(unknown))}")
        config = replace(config, **{k: v for k, v in overrides.items() if v is not None})
    return config
