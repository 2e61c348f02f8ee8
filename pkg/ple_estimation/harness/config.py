"""
Experiment configuration from flat KEY=VALUE files and command-line overrides.

Precedence is defaults < file < overrides. Keys are case-insensitive field
names of :class:`ExperimentConfig`; list values are comma-separated.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

from dotenv import dotenv_values
from pydantic import ValidationError

from ..base import ExperimentConfig, ExperimentKind, RoutingMode
from ..base.experiment import ROUTING_EXPERIMENTS
from ..exceptions import ConfigurationError

logger = logging.getLogger(__name__)

LIST_FIELDS = frozenset({"gammas", "sigmas", "densities", "levels", "windows", "alphas", "methods"})

# Singular spellings accepted in files
KEY_ALIASES = {
    "gamma": "gammas",
    "ple": "gammas",
    "shadow_sigma": "sigmas",
    "sigma": "sigmas",
    "density": "densities",
    "level": "levels",
    "window": "windows",
    "alpha": "alphas",
    "method_list": "methods",
    "out": "output_path",
}


def _normalise_key(key: str) -> str:
    name = key.strip().lower().replace("-", "_")
    name = KEY_ALIASES.get(name, name)
    if name not in ExperimentConfig.model_fields:
        raise ConfigurationError(f"Unknown configuration key '{key}'")
    return name


def read_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Parse a KEY=VALUE file into config field values.

    Raises:
        ConfigurationError: if the file is missing, a key is unknown or a
            key has no value
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"Configuration file not found: {path}")
    values: Dict[str, Any] = {}
    for key, raw in dotenv_values(path).items():
        name = _normalise_key(key)
        if raw is None or raw.strip() == "":
            raise ConfigurationError(f"Configuration key '{key}' has no value")
        if name in LIST_FIELDS:
            values[name] = [item.strip() for item in raw.split(",") if item.strip()]
        else:
            values[name] = raw.strip()
    logger.debug("Read %d keys from %s", len(values), path)
    return values


def load_config(
    experiment: Union[str, ExperimentKind],
    path: Optional[Union[str, Path]] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> ExperimentConfig:
    """
    Build a validated configuration for ``experiment``.

    Args:
        experiment: Experiment kind
        path: Optional KEY=VALUE file
        overrides: Values that win over the file; None entries are ignored

    Returns:
        ExperimentConfig

    Raises:
        ConfigurationError: on unknown keys or values that fail validation
    """
    values: Dict[str, Any] = read_config_file(path) if path is not None else {}
    for key, value in (overrides or {}).items():
        if value is not None:
            values[_normalise_key(key)] = value
    values["experiment"] = experiment
    try:
        return ExperimentConfig(**values)
    except ValidationError as e:
        raise ConfigurationError(f"Invalid configuration: {e}") from e


def routing_experiment(
    path: Optional[Union[str, Path]] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> ExperimentKind:
    """
    Routing experiment kind from ``routing_mode``, taken from the overrides,
    then the file, then the Monte Carlo default.

    Raises:
        ConfigurationError: for an unknown routing mode
    """
    requested = (overrides or {}).get("routing_mode")
    if requested is None and path is not None:
        requested = read_config_file(path).get("routing_mode")
    try:
        mode = RoutingMode(requested) if requested is not None else RoutingMode.MONTE_CARLO
    except ValueError as e:
        raise ConfigurationError(f"Unknown routing mode '{requested}'") from e
    return ROUTING_EXPERIMENTS[mode]
