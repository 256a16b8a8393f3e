"""Built-in presets and TOML experiment configuration."""
from __future__ import annotations

import hashlib
import logging
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Union

from pydantic import ValidationError

from qlwe.core.exceptions import ConfigError
from qlwe.schemas.preset import PresetConfig

logger = logging.getLogger(__name__)

BUILTIN_PRESETS: dict[str, dict] = {
    "tiny": {
        "name": "tiny",
        "description": "Smallest desk instance; exhaustive oracles everywhere",
        "params": {"n": 2, "m": 6, "q": 64, "B_V": 1, "C": 1, "epsilon": 0.5},
        "trials": {"count": 1000},
    },
    "closeness": {
        "name": "closeness",
        "description": "Enumerable H_k for exact projection checks (closeness precondition relaxed)",
        "params": {"n": 1, "m": 3, "q": 64, "B_V": 1, "C": 7, "epsilon": 0.5},
        "trials": {"count": 1000},
    },
    "honest": {
        "name": "honest",
        "description": "Gadget-trapdoor instance meeting the closeness precondition at ε = 0.04",
        "params": {"n": 12, "m": 324, "q": 1 << 26, "B_V": 1, "C": 1, "epsilon": 0.04},
        "trials": {"count": 10000},
    },
    "baseline": {
        "name": "baseline",
        "description": "Gadget-trapdoor instance for the classical baseline provers",
        "params": {"n": 16, "m": 208, "q": 4096, "B_V": 1, "C": 1, "epsilon": 0.5},
        "trials": {"count": 10000},
    },
    "strict": {
        "name": "strict",
        "mode": "strict-symbolic",
        "description": "Asymptotic parameter choices; not desk-runnable",
        "symbolic": {
            "epsilon": "1/n",
            "B_L": "Θ(n)",
            "m": "Θ(n^2)",
            "q": "Θ(B_V · n^(9/2)), prime",
            "B_V/B_L": "superpolynomial in n",
        },
    },
}


def _field_errors(exc: ValidationError) -> list[str]:
    return [
        f"{'.'.join(str(part) for part in err['loc']) or '<root>'}: {err['msg']}"
        for err in exc.errors()
    ]


def parse_config(document: dict) -> PresetConfig:
    """Validate a parsed TOML document (sections preset, params, trials, symbolic)."""
    header = document.get("preset", {})
    data = {
        "name": header.get("name", document.get("name")),
        "mode": header.get("mode", "desk"),
        "description": header.get("description", ""),
        "trials": document.get("trials", {}),
        "symbolic": document.get("symbolic", {}),
    }
    if "params" in document:
        data["params"] = document["params"]
    try:
        return PresetConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError("invalid configuration", _field_errors(exc)) from exc


def builtin_preset(name: str) -> PresetConfig:
    try:
        return PresetConfig.model_validate(BUILTIN_PRESETS[name])
    except KeyError:
        raise ConfigError(f"unknown preset '{name}'", [f"choose one of {', '.join(BUILTIN_PRESETS)}"]) from None


def load_config(path: Union[str, Path]) -> PresetConfig:
    """
    Resolve a preset name or a TOML file to a validated preset.

    Args:
        path: Built-in preset name or path to a TOML file

    Returns:
        PresetConfig: Preset with derived r and B_P computed
    """
    candidate = Path(path)
    if not candidate.exists() and str(path) in BUILTIN_PRESETS:
        return builtin_preset(str(path))
    if not candidate.is_file():
        raise ConfigError(f"configuration file not found: {path}")
    try:
        with candidate.open("rb") as fh:
            document = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"cannot parse {path}", [str(exc)]) from exc
    preset = parse_config(document)
    if preset.params is not None:
        logger.info(
            "loaded preset '%s': r=%d, B_P=%.4f", preset.name, preset.params.r, preset.params.B_P
        )
    return preset


def config_hash(preset: PresetConfig) -> str:
    """SHA-256 over the canonical JSON of the preset."""
    return hashlib.sha256(preset.model_dump_json(by_alias=True).encode()).hexdigest()
