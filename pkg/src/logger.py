"""
Logging configuration and utilities for onionhash
"""

import logging
import logging.config
import re
import sys
from pathlib import Path

import yaml
from rich.console import Console
from rich.logging import RichHandler

ROOT = Path(__file__).resolve().parent.parent
DEFAULT_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

# 64+ hex characters: pepper-shaped or digest-shaped material
_SECRET_PATTERN = re.compile(r"\b[0-9a-fA-F]{64,}\b")


class RedactingFilter(logging.Filter):
    """Masks long hex runs so pepper or digest material never reaches a handler"""

    def filter(self, record: logging.LogRecord) -> bool:
        message = record.getMessage()
        if _SECRET_PATTERN.search(message):
            record.msg = _SECRET_PATTERN.sub("<redacted>", message)
            record.args = None
        return True


class OnionLogger:
    """Process-wide logger setup; configures the logging tree once"""

    _instance = None
    _initialized = False

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        if not self._initialized:
            self._setup_logging()
            OnionLogger._initialized = True

    def _setup_logging(self):
        """Setup logging configuration"""
        config_path = ROOT / "config" / "logging_config.yaml"

        if config_path.exists():
            try:
                with open(config_path, "r") as f:
                    logging.config.dictConfig(yaml.safe_load(f))
                return
            except Exception as e:
                print(f"Warning: Could not load logging config: {e}", file=sys.stderr)
        self._setup_basic_logging(self._load_settings())

    @staticmethod
    def _load_settings() -> dict:
        settings_path = ROOT / "config" / "default_config.yaml"
        try:
            with open(settings_path, "r") as f:
                return (yaml.safe_load(f) or {}).get("logging", {}) or {}
        except (OSError, yaml.YAMLError):
            return {}

    def _setup_basic_logging(self, settings: dict):
        """Setup logging from the `logging` section of the default config"""
        handlers = []
        if settings.get("console_enabled", True):
            # stderr keeps CLI stdout clean for structured output
            handlers.append(RichHandler(console=Console(stderr=True), rich_tracebacks=True, markup=False))
        if settings.get("file_enabled", False):
            log_file = Path(settings.get("file_path", "logs/onionhash.log"))
            log_file.parent.mkdir(parents=True, exist_ok=True)
            file_handler = logging.FileHandler(log_file)
            file_handler.setFormatter(logging.Formatter(settings.get("format", DEFAULT_FORMAT)))
            handlers.append(file_handler)

        for handler in handlers:
            handler.addFilter(RedactingFilter())

        root = logging.getLogger()
        for handler in handlers:
            root.addHandler(handler)
        root.setLevel(_level_from_name(settings.get("level", "INFO")))

    def get_logger(self, name: str) -> logging.Logger:
        """Get a logger instance"""
        return logging.getLogger(name)


def _level_from_name(level: str) -> int:
    numeric_level = getattr(logging, str(level).upper(), None)
    if not isinstance(numeric_level, int):
        raise ValueError(f"Invalid log level: {level}")
    return numeric_level


# Singleton instance
_logger_instance = OnionLogger()


def get_logger(name: str) -> logging.Logger:
    """
    Get a configured logger instance

    Args:
        name: Logger name (typically __name__)

    Returns:
        Configured logger instance
    """
    return _logger_instance.get_logger(name)


def set_log_level(level: str):
    """
    Set the global log level

    Args:
        level: Log level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
    """
    logging.getLogger().setLevel(_level_from_name(level))
