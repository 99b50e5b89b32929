"""Layered hash chains: specs, presets and evaluation"""

from .evaluator import (
    MAX_PASSWORD_OCTETS,
    Octets,
    VerificationOutcome,
    evaluate_chain,
    evaluate_from,
    stage_trace_hex,
    to_octets,
    verify,
)
from .registry import (
    FB2014_VERSION,
    LEGACY_MD5_VERSION,
    SHA256_V1_VERSION,
    facebook2014_chain,
    get_chain,
    legacy_md5_chain,
    list_chains,
    register_chain,
    sha256_v1_chain,
    with_scrypt_cost,
)
from .spec import (
    ChainSpec,
    InputEncoding,
    Pepper,
    SaltRole,
    SaltSet,
    StageKind,
    StageOutput,
    StageSpec,
    StageTrace,
)

__all__ = [
    'MAX_PASSWORD_OCTETS', 'Octets', 'VerificationOutcome', 'evaluate_chain', 'evaluate_from', 'stage_trace_hex',
    'to_octets', 'verify', 'FB2014_VERSION', 'LEGACY_MD5_VERSION', 'SHA256_V1_VERSION',
    'facebook2014_chain', 'get_chain', 'legacy_md5_chain', 'list_chains', 'register_chain',
    'sha256_v1_chain', 'with_scrypt_cost', 'ChainSpec', 'InputEncoding', 'Pepper', 'SaltRole',
    'SaltSet', 'StageKind', 'StageOutput', 'StageSpec', 'StageTrace',
]
