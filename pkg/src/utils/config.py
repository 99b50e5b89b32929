"""
Configuration loading for onionhash

``config/default_config.yaml`` is always read; a ``--config`` file is layered
on top of it key by key, so an override file only needs the keys it changes.
"""

import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import find_dotenv, load_dotenv

from ..logger import ROOT, get_logger

logger = get_logger(__name__)

DEFAULT_CONFIG_PATH = ROOT / "config" / "default_config.yaml"


def load_env_variables() -> None:
    """Load a .env file into os.environ, except under pytest"""
    # tests delete ONIONHASH_* on purpose; a .env must not put them back
    if os.getenv('PYTEST_CURRENT_TEST') is not None:
        return

    env_path = find_dotenv(usecwd=True)
    if env_path:
        load_dotenv(env_path)
        logger.debug(f"Environment variables loaded from {env_path}")


def _read_yaml(path: Path) -> Dict[str, Any]:
    if not path.exists():
        raise FileNotFoundError(f"Configuration file not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
    except yaml.YAMLError as e:
        raise ValueError(f"Error parsing configuration file {path}: {e}") from e
    if not isinstance(data, dict):
        raise ValueError(f"Configuration file {path} must hold a mapping")
    return data


def merge_config(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """Deep-merge ``override`` into a copy of ``base``; lists and scalars replace"""
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge_config(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config(config_path: Optional[str] = None) -> Dict[str, Any]:
    """
    Load configuration

    Args:
        config_path: Optional override file layered over the defaults

    Returns:
        Configuration dictionary

    Raises:
        FileNotFoundError: a named file does not exist
        ValueError: a file is not valid YAML or not a mapping
    """
    load_env_variables()

    config = _read_yaml(DEFAULT_CONFIG_PATH) if DEFAULT_CONFIG_PATH.exists() else {}
    if config_path:
        config = merge_config(config, _read_yaml(Path(config_path)))
        logger.debug(f"Configuration override loaded from {config_path}")
    return config


def config_value(config: Dict[str, Any], dotted: str, default: Any = None) -> Any:
    """Look up ``a.b.c`` in nested config dictionaries"""
    node: Any = config
    for part in dotted.split("."):
        if not isinstance(node, dict) or part not in node:
            return default
        node = node[part]
    return node


def ensure_directory(directory) -> Path:
    """Create ``directory`` (and parents) if missing"""
    dir_path = Path(directory)
    dir_path.mkdir(parents=True, exist_ok=True)
    return dir_path
