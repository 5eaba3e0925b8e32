from __future__ import annotations

from pathlib import Path
from typing import Any
import json
import logging
import re

from .errors import ConfigError, DataIOError

logger = logging.getLogger(__name__)

# Starter documents for `rggspec new config <preset>`; they mirror the two
# published figure setups at desk scale.
PRESETS: dict[str, dict[str, Any]] = {
    "fig2a": {
        "regime": "connectivity",
        "n": [512, 2048, 4096],
        "trials": 10,
        "seed": 0,
    },
    "fig2b": {
        "regime": "thermodynamic",
        "gamma": 12,
        "alpha": 0.001,
        "n": [4096],
        "trials": 20,
        "seed": 0,
        "samples": 30000,
    },
    "sweep": {
        "regime": "thermodynamic",
        "gamma": 12,
        "alpha": 0.001,
        "n": [1024, 4096],
        "trials": 20,
        "seed": 0,
        "workers": 4,
    },
    "dense": {
        "regime": "dense",
        "rho": 0.5,
        "n": [1024],
        "trials": 10,
        "seed": 0,
    },
}


def slugify(value: str) -> str:
    """
    Create a simple file-name-friendly slug.

    Rules:
        - lower-case
        - replace whitespace with '-'
        - remove characters that are not alphanumeric or '-'
        - collapse multiple '-' into one
        - strip leading/trailing '-'
    """
    value = value.strip().lower()
    value = re.sub(r"\s+", "-", value)
    value = re.sub(r"[^a-z0-9\-]", "", value)
    value = re.sub(r"-{2,}", "-", value)
    return value.strip("-") or "config"


def _ensure_unique_path(base_dir: Path, slug: str) -> Path:
    """
    Ensure the config path is unique inside base_dir.

    If `slug.json` exists, try `slug-2.json`, `slug-3.json`, ...
    """
    candidate = base_dir / f"{slug}.json"
    counter = 2
    while candidate.exists():
        candidate = base_dir / f"{slug}-{counter}.json"
        counter += 1
    return candidate


def create_config(directory: Path, preset: str, name: str | None = None) -> Path:
    """
    Write a starter config for `preset` into `directory` and return its path.

    The file name is the slug of `name` (default: the preset name).
    """
    if preset not in PRESETS:
        raise ConfigError(f"unknown preset {preset!r}; choose one of {', '.join(PRESETS)}")
    try:
        directory.mkdir(parents=True, exist_ok=True)
        path = _ensure_unique_path(directory, slugify(name or preset))
        path.write_text(json.dumps(PRESETS[preset], indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        raise DataIOError(directory, exc.strerror or exc) from exc
    logger.debug("created %s config at %s", preset, path)
    return path
