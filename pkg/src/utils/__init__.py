"""Utilities package for onionhash - expose helper modules for easy imports"""

from .config import DEFAULT_CONFIG_PATH, config_value, ensure_directory, load_config, load_env_variables, merge_config
from .files import atomic_write_text
from .queue_manager import QueueManager
from .reporter import Reporter

__all__ = [
    'DEFAULT_CONFIG_PATH', 'config_value', 'ensure_directory', 'load_config', 'load_env_variables', 'merge_config',
    'atomic_write_text', 'QueueManager', 'Reporter',
]
