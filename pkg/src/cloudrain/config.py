"""
Configuration loading.

A configuration file is a flat ``key = value`` document (the same syntax as a
``.env`` file) whose keys are SimConfig field names, case-insensitive.
Environment variables ``CLOUDRAIN_<FIELD>`` override file values.
"""

import logging
import os
from pathlib import Path
from typing import Dict, Mapping, Optional, Union

from dotenv import dotenv_values
from pydantic import ValidationError

from cloudrain.errors import ConfigError, ResultsIOError
from cloudrain.types import SimConfig

logger = logging.getLogger(__name__)

ENV_PREFIX = "CLOUDRAIN_"

_TRUE = {"true", "yes", "on"}
_FALSE = {"false", "no", "off"}


def _parse_value(raw: Optional[str]):
    if raw is None:
        return None
    text = raw.strip()
    lowered = text.lower()
    if lowered in ("", "none", "null"):
        return None
    if lowered in _TRUE:
        return True
    if lowered in _FALSE:
        return False
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def _normalise(values: Mapping[str, Optional[str]]) -> Dict[str, object]:
    return {key.strip().lower(): _parse_value(value) for key, value in values.items()}


def config_from_mapping(values: Mapping[str, object]) -> SimConfig:
    """Validate already-parsed key/value pairs into a SimConfig.

    Raises:
        ConfigError: Naming the first offending key
    """
    try:
        return SimConfig.model_validate(dict(values))
    except ValidationError as e:
        first = e.errors()[0]
        key = ".".join(str(part) for part in first["loc"]) or "<config>"
        if first["type"] == "extra_forbidden":
            raise ConfigError(f"Invalid Config Key: {key}") from e
        raise ConfigError(f"Invalid Config Value for {key}: {first['msg']}") from e


def read_config_values(path: Union[str, Path]) -> Dict[str, object]:
    """Parsed key/value pairs of a configuration file, without defaults."""
    if not Path(path).is_file():
        raise ConfigError(f"Invalid Config Path: {path} does not exist")
    values = _normalise(dotenv_values(path))
    logger.debug("loaded %d keys from %s", len(values), path)
    return values


def load_config(
    path: Optional[Union[str, Path]] = None, env_prefix: str = ENV_PREFIX
) -> SimConfig:
    """Build a SimConfig from defaults, an optional file and the environment."""
    values: Dict[str, object] = {}
    if path is not None:
        values.update(read_config_values(path))

    overrides = {
        key[len(env_prefix):]: value
        for key, value in os.environ.items()
        if key.upper().startswith(env_prefix.upper())
    }
    if overrides:
        logger.debug("environment overrides: %s", sorted(overrides))
        values.update(_normalise(overrides))
    return config_from_mapping(values)


def dump_config(cfg: SimConfig, path: Union[str, Path]) -> Path:
    """Write cfg in the format read by load_config."""
    lines = []
    for key, value in cfg.model_dump().items():
        lines.append(f"{key} = {'' if value is None else value}")
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(lines) + "\n")
    except OSError as e:
        raise ResultsIOError(path, str(e)) from e
    return path


__all__ = [
    "ENV_PREFIX",
    "config_from_mapping",
    "read_config_values",
    "load_config",
    "dump_config",
]
