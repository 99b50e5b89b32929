"""
Environment settings and validated CLI configuration

Precedence for every value: CLI flag > ONIONHASH_* environment > YAML > built-in default.
"""

from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional

from pydantic import BaseModel, SecretStr, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from ..chains import Pepper, list_chains
from ..errors import PepperError
from .config import config_value

DEFAULT_STORE_PATH = "data/onionstore.txt"
DEFAULT_CHAIN = "fb2014"
DEFAULT_BIND = "127.0.0.1:8731"


class OnionSettings(BaseSettings):
    """ONIONHASH_* environment variables"""

    model_config = SettingsConfigDict(env_prefix="ONIONHASH_", extra="ignore")

    pepper: Optional[SecretStr] = None
    store: Optional[Path] = None
    chain: Optional[str] = None
    bind: Optional[str] = None


class OutputFormat(str, Enum):
    HUMAN = "human"
    STRUCTURED = "structured"


class CliConfig(BaseModel):
    store_path: Path
    chain_version: str
    pepper_source: str
    output_format: OutputFormat = OutputFormat.HUMAN

    @field_validator("chain_version")
    @classmethod
    def _known_chain(cls, value: str) -> str:
        if value not in list_chains():
            raise ValueError(f"unknown chain '{value}'")
        return value


def resolve_cli_config(
    config: Dict[str, Any],
    settings: OnionSettings,
    store: Optional[str] = None,
    chain: Optional[str] = None,
    output_format: str = OutputFormat.HUMAN.value,
) -> CliConfig:
    """Merge flag, environment and YAML values into a validated CliConfig"""
    store_path = store or settings.store or config_value(config, "store.path", DEFAULT_STORE_PATH)
    chain_version = chain or settings.chain or config_value(config, "chain.default", DEFAULT_CHAIN)
    return CliConfig(
        store_path=Path(store_path),
        chain_version=chain_version,
        pepper_source="env:ONIONHASH_PEPPER" if settings.pepper else "unset",
        output_format=OutputFormat(output_format),
    )


def load_pepper(settings: OnionSettings) -> Pepper:
    """Pepper from ONIONHASH_PEPPER; raises PepperError when absent or malformed"""
    if settings.pepper is None:
        raise PepperError("ONIONHASH_PEPPER is not set (64 hex characters)")
    return Pepper.from_hex(settings.pepper.get_secret_value())
