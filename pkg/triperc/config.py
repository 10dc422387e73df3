"""
Configuration for triperc campaigns.

Settings are resolved from four layers, highest precedence first:

1. command-line flags (passed in as ``overrides``)
2. a config file given with ``--config`` (flat ``key=value`` file or a JSON object)
3. ``TRIPERC_*`` environment variables, with a ``.env`` file loaded first
4. the defaults below
"""

import json
import logging
import os
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

from dotenv import dotenv_values, load_dotenv

from triperc.errors import ConfigError

logger = logging.getLogger(__name__)

ENV_PREFIX = "TRIPERC_"

# Largest series argument evaluated before symmetry identities or a range error kick in.
DEFAULT_LAMBDA_CAP = 0.95

LABEL_METHODS = ("ndimage", "union_find")
B_EVENT_MODES = ("either", "same")


@dataclass(frozen=True)
class Settings:
    """Resolved campaign settings."""

    seed: int = 0
    trials: int = 1000
    truncation: Optional[int] = None
    lambda_cap: float = DEFAULT_LAMBDA_CAP
    workers: int = 1
    chunk_size: int = 256
    label_method: str = "ndimage"
    b_event_mode: str = "either"
    records: str = "runs.jsonl"
    out_dir: str = "."
    progress: bool = True
    first_trial: int = 0

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError(f"trials must be positive, got {self.trials}")
        if self.workers < 1:
            raise ConfigError(f"workers must be positive, got {self.workers}")
        if self.first_trial < 0:
            raise ConfigError(f"first_trial must be nonnegative, got {self.first_trial}")
        if self.chunk_size < 1:
            raise ConfigError(f"chunk_size must be positive, got {self.chunk_size}")
        if self.truncation is not None and self.truncation < 1:
            raise ConfigError(f"truncation must be positive, got {self.truncation}")
        if not 0.0 < self.lambda_cap < 1.0:
            raise ConfigError(f"lambda_cap must lie in (0, 1), got {self.lambda_cap}")
        if self.label_method not in LABEL_METHODS:
            raise ConfigError(f"label_method must be one of {LABEL_METHODS}, got {self.label_method!r}")
        if self.b_event_mode not in B_EVENT_MODES:
            raise ConfigError(f"b_event_mode must be one of {B_EVENT_MODES}, got {self.b_event_mode!r}")


def _coerce(name: str, raw: Any) -> Any:
    """Convert a raw config value (usually a string) to the type of the named field."""
    if raw is None:
        return None
    if name in ("seed", "trials", "workers", "chunk_size", "first_trial"):
        return int(raw)
    if name == "truncation":
        if isinstance(raw, str) and raw.strip().lower() in ("", "none", "default"):
            return None
        return int(raw)
    if name == "lambda_cap":
        return float(raw)
    if name == "progress":
        if isinstance(raw, bool):
            return raw
        return str(raw).strip().lower() in ("1", "true", "yes", "on")
    return str(raw)


def _validated(values: Mapping[str, Any], source: str) -> Dict[str, Any]:
    known = {f.name for f in fields(Settings)}
    result = {}
    for key, raw in values.items():
        name = key.lower()
        if name not in known:
            raise ConfigError(f"Unknown config key {key!r} in {source}")
        try:
            result[name] = _coerce(name, raw)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Bad value for {key!r} in {source}: {e}") from e
    return result


def read_config_file(path: str) -> Dict[str, Any]:
    """Read a flat key=value file (dotenv syntax) or a JSON object."""
    config_path = Path(path)
    if not config_path.exists():
        raise ConfigError(f"Config file not found: {path}")

    if config_path.suffix.lower() == ".json":
        try:
            with open(config_path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"Config file {path} is not valid JSON: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"Config file {path} must hold a JSON object")
    else:
        data = dict(dotenv_values(config_path))

    logger.debug("Loaded %d config keys from %s", len(data), path)
    return _validated(data, str(path))


def environment_settings(environ: Optional[Mapping[str, str]] = None) -> Dict[str, Any]:
    """Collect TRIPERC_* variables (after loading a .env file from the working directory)."""
    if environ is None:
        load_dotenv()
        environ = os.environ
    values = {
        key[len(ENV_PREFIX):]: value
        for key, value in environ.items()
        if key.startswith(ENV_PREFIX)
    }
    # TRIPERC_SLOW_TESTS belongs to the test suite, not to the campaign settings
    values.pop("SLOW_TESTS", None)
    return _validated(values, "environment")


def load_settings(
    config_path: Optional[str] = None,
    overrides: Optional[Mapping[str, Any]] = None,
    environ: Optional[Mapping[str, str]] = None,
) -> Settings:
    """
    Resolve settings from defaults, environment, config file and flag overrides.

    Args:
        config_path: Optional path to a key=value or JSON config file
        overrides: Flag values; entries that are None are ignored
        environ: Environment mapping (defaults to os.environ after loading .env)

    Returns:
        The resolved Settings
    """
    values: Dict[str, Any] = {}
    values.update(environment_settings(environ))
    if config_path:
        values.update(read_config_file(config_path))
    if overrides:
        values.update(_validated({k: v for k, v in overrides.items() if v is not None}, "flags"))
    return replace(Settings(), **values)
