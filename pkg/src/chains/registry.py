"""Chain registry for named presets and extensibility.

This module centralizes the chain versions the store, CLI and authd
understand. A record's version label is resolved here to the ChainSpec
that verifies it; unknown labels are preserved by the store but cannot
be verified.

Usage:
    from src.chains import registry
    registry.list_chains()
    registry.get_chain('fb2014')
    registry.register_chain(my_spec)
"""
from dataclasses import replace
from typing import Callable, Dict, List

from ..errors import InvalidSpecError, UnknownChainError
from ..primitives import ScryptParams
from .spec import ChainSpec, InputEncoding, SaltRole, StageKind, StageSpec

FB2014_VERSION = "fb2014"
SHA256_V1_VERSION = "sha256-v1"
LEGACY_MD5_VERSION = "md5"

# Interactive-login scrypt cost: N=2^14, r=8, p=1.
# dk_len=64 makes the final SHA-256 a real shortening step.
FB2014_SCRYPT = ScryptParams(n=2 ** 14, r=8, p=1, dk_len=64)


def facebook2014_chain() -> ChainSpec:
    """md5 -> salted sha1 -> peppered hmac-sha256 -> scrypt -> sha256"""
    return ChainSpec.build(FB2014_VERSION, [
        StageSpec(StageKind.MD5_PLAIN, InputEncoding.RAW_BYTES),
        StageSpec(StageKind.SHA1_SALTED, salt_role=SaltRole.SHA1),
        StageSpec(StageKind.HMAC_SHA256_PEPPERED),
        StageSpec(StageKind.SCRYPT, scrypt=FB2014_SCRYPT, salt_role=SaltRole.SCRYPT),
        StageSpec(StageKind.SHA256_PLAIN),
    ])


def sha256_v1_chain() -> ChainSpec:
    """Single salted SHA-256 stage; the non-vulnerable control chain"""
    return ChainSpec.build(SHA256_V1_VERSION, [
        StageSpec(StageKind.SHA256_PLAIN, InputEncoding.RAW_BYTES, salt_role=SaltRole.SCRYPT),
    ])


def legacy_md5_chain() -> ChainSpec:
    """Unsalted MD5, the format of pre-upgrade stores"""
    return ChainSpec.build(LEGACY_MD5_VERSION, [
        StageSpec(StageKind.MD5_PLAIN, InputEncoding.RAW_BYTES),
    ])


# Built-in chain builders. Keep this small and editable.
_CHAINS: Dict[str, Callable[[], ChainSpec]] = {
    FB2014_VERSION: facebook2014_chain,
    SHA256_V1_VERSION: sha256_v1_chain,
    LEGACY_MD5_VERSION: legacy_md5_chain,
}


def list_chains() -> List[str]:
    """Return chain versions in registry order."""
    return list(_CHAINS.keys())


def get_chain(version: str) -> ChainSpec:
    builder = _CHAINS.get(version)
    if builder is None:
        raise UnknownChainError(f"unknown chain '{version}' (known: {', '.join(_CHAINS)})")
    return builder()


def has_chain(version: str) -> bool:
    return version in _CHAINS


def register_chain(spec: ChainSpec) -> None:
    """Register a new chain or replace an existing version."""
    if not isinstance(spec, ChainSpec):
        raise InvalidSpecError("register_chain expects a ChainSpec")
    _CHAINS[spec.version] = lambda: spec


def with_scrypt_cost(spec: ChainSpec, n: int) -> ChainSpec:
    """
    Copy of ``spec`` with every scrypt stage's cost replaced by ``n``

    The version label is kept, so records made with the copy only verify
    against the copy. Meant for fast test runs.
    """
    stages = tuple(
        replace(stage, scrypt=replace(stage.scrypt, n=n)) if stage.kind is StageKind.SCRYPT else stage
        for stage in spec.stages
    )
    return ChainSpec(version=spec.version, stages=stages, output_width_bits=spec.output_width_bits)
