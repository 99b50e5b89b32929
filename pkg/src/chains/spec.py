"""
Chain specification types: stages, chains, salts, pepper and traces
"""

import os
import re
import secrets
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

from ..errors import InvalidSpecError, PepperError
from ..primitives import Algorithm, Digest, ScryptParams

SHA1_SALT_LEN = 20
SCRYPT_SALT_LEN = 32
PEPPER_LEN = 32
PEPPER_ENV_VAR = "ONIONHASH_PEPPER"

# Version labels appear verbatim between '$' separators in store lines
VERSION_PATTERN = re.compile(r"[A-Za-z0-9._-]+")
_PEPPER_HEX = re.compile(rf"[0-9a-f]{{{PEPPER_LEN * 2}}}")


def validate_version(version: str) -> str:
    """Raise InvalidSpecError unless ``version`` is a non-empty [A-Za-z0-9._-] label"""
    if not isinstance(version, str) or not VERSION_PATTERN.fullmatch(version):
        raise InvalidSpecError(f"invalid chain version label: {version!r}")
    return version


class StageKind(str, Enum):
    MD5_PLAIN = "md5"
    SHA1_SALTED = "sha1-salted"
    HMAC_SHA256_PEPPERED = "hmac-sha256-peppered"
    SCRYPT = "scrypt"
    SHA256_PLAIN = "sha256"


class InputEncoding(str, Enum):
    RAW_BYTES = "raw"
    LOWER_HEX = "hex"


class SaltRole(str, Enum):
    SHA1 = "sha1"
    SCRYPT = "scrypt"


# Names used in traces and diagnostics, one per stage kind
STAGE_NAMES = {
    StageKind.MD5_PLAIN: "md5",
    StageKind.SHA1_SALTED: "sha1",
    StageKind.HMAC_SHA256_PEPPERED: "hmac_sha256",
    StageKind.SCRYPT: "scrypt",
    StageKind.SHA256_PLAIN: "sha256",
}

_STAGE_ALGORITHMS = {
    StageKind.MD5_PLAIN: Algorithm.MD5,
    StageKind.SHA1_SALTED: Algorithm.SHA1,
    StageKind.HMAC_SHA256_PEPPERED: Algorithm.SHA256,
    StageKind.SHA256_PLAIN: Algorithm.SHA256,
}


@dataclass(frozen=True)
class StageSpec:
    """
    One stage of a chain

    ``input_encoding`` says how the previous stage's output (or, for the
    first stage, the password) is turned into this stage's message.
    ``salt_role`` picks which per-user salt the stage mixes in; it is
    required for salted SHA-1 and scrypt and optional for SHA-256.
    """

    kind: StageKind
    input_encoding: InputEncoding = InputEncoding.LOWER_HEX
    scrypt: Optional[ScryptParams] = None
    salt_role: Optional[SaltRole] = None

    def __post_init__(self):
        if self.kind is StageKind.SCRYPT:
            if not isinstance(self.scrypt, ScryptParams):
                raise InvalidSpecError("scrypt stage requires ScryptParams")
            if self.salt_role is None:
                object.__setattr__(self, "salt_role", SaltRole.SCRYPT)
        elif self.scrypt is not None:
            raise InvalidSpecError(f"{self.kind.value} stage does not take scrypt params")
        if self.kind is StageKind.SHA1_SALTED and self.salt_role is None:
            object.__setattr__(self, "salt_role", SaltRole.SHA1)
        if self.kind in (StageKind.MD5_PLAIN, StageKind.HMAC_SHA256_PEPPERED) and self.salt_role is not None:
            raise InvalidSpecError(f"{self.kind.value} stage is not salted")

    @property
    def name(self) -> str:
        return STAGE_NAMES[self.kind]

    @property
    def algorithm(self) -> Optional[Algorithm]:
        """Underlying hash algorithm, None for scrypt"""
        return _STAGE_ALGORITHMS.get(self.kind)

    @property
    def output_bits(self) -> int:
        if self.kind is StageKind.SCRYPT:
            return 8 * self.scrypt.dk_len
        return self.algorithm.bits

    @property
    def salted(self) -> bool:
        return self.salt_role is not None

    @property
    def memory_hard(self) -> bool:
        return self.kind is StageKind.SCRYPT


@dataclass(frozen=True)
class ChainSpec:
    """Ordered, nonempty list of stages plus the version label stored in records"""

    version: str
    stages: Tuple[StageSpec, ...]
    output_width_bits: int

    def __post_init__(self):
        object.__setattr__(self, "stages", tuple(self.stages))
        validate_version(self.version)
        if not self.stages:
            raise InvalidSpecError("chain must have at least one stage")
        if not all(isinstance(s, StageSpec) for s in self.stages):
            raise InvalidSpecError("chain stages must be StageSpec instances")
        if self.output_width_bits != self.stages[-1].output_bits:
            raise InvalidSpecError(
                f"output_width_bits {self.output_width_bits} does not match final stage width {self.stages[-1].output_bits}"
            )

    @classmethod
    def build(cls, version: str, stages) -> "ChainSpec":
        stages = tuple(stages)
        if not stages:
            raise InvalidSpecError("chain must have at least one stage")
        return cls(version=version, stages=stages, output_width_bits=stages[-1].output_bits)

    @property
    def output_octets(self) -> int:
        return self.output_width_bits // 8

    @property
    def requires_salts(self) -> bool:
        return any(s.salted for s in self.stages)

    @property
    def requires_pepper(self) -> bool:
        return any(s.kind is StageKind.HMAC_SHA256_PEPPERED for s in self.stages)


@dataclass(frozen=True)
class SaltSet:
    """Per-user salts; stored in the clear next to the record"""

    sha1_salt: bytes
    scrypt_salt: bytes

    def __post_init__(self):
        if len(self.sha1_salt) != SHA1_SALT_LEN:
            raise InvalidSpecError(f"sha1_salt must be {SHA1_SALT_LEN} octets")
        if len(self.scrypt_salt) != SCRYPT_SALT_LEN:
            raise InvalidSpecError(f"scrypt_salt must be {SCRYPT_SALT_LEN} octets")

    @classmethod
    def generate(cls) -> "SaltSet":
        return cls(secrets.token_bytes(SHA1_SALT_LEN), secrets.token_bytes(SCRYPT_SALT_LEN))

    @classmethod
    def zeros(cls) -> "SaltSet":
        return cls(bytes(SHA1_SALT_LEN), bytes(SCRYPT_SALT_LEN))

    def salt_for(self, role: SaltRole) -> bytes:
        return self.sha1_salt if role is SaltRole.SHA1 else self.scrypt_salt


@dataclass(frozen=True)
class Pepper:
    """Service-wide secret key; held in memory only, never written to a store"""

    secret: bytes = field(repr=False)

    def __post_init__(self):
        if len(self.secret) != PEPPER_LEN:
            raise PepperError(f"pepper must be {PEPPER_LEN} octets")

    def __repr__(self) -> str:
        return "Pepper(<redacted>)"

    __str__ = __repr__

    @classmethod
    def from_hex(cls, text: str) -> "Pepper":
        """Exactly 64 lowercase hex characters, no surrounding whitespace, like Digest.from_hex"""
        if not isinstance(text, str) or not _PEPPER_HEX.fullmatch(text):
            raise PepperError(f"pepper must be {PEPPER_LEN * 2} lowercase hex characters")
        return cls(bytes.fromhex(text))

    @classmethod
    def from_env(cls, var: str = PEPPER_ENV_VAR) -> "Pepper":
        value = os.getenv(var)
        if not value:
            raise PepperError(f"${var} is not set")
        return cls.from_hex(value)

    @classmethod
    def zeros(cls) -> "Pepper":
        return cls(bytes(PEPPER_LEN))


@dataclass(frozen=True)
class StageOutput:
    name: str
    octets: bytes

    def hex(self) -> str:
        return self.octets.hex()


@dataclass(frozen=True)
class StageTrace:
    """
    Per-stage outputs of one chain evaluation, in stage order

    For the fb2014 chain the named accessors map to the intermediates
    m, s1, s2, s3 and the stored ``value``.
    """

    outputs: Tuple[StageOutput, ...]

    def _first(self, name: str) -> Optional[bytes]:
        for out in self.outputs:
            if out.name == name:
                return out.octets
        return None

    @property
    def m(self) -> Optional[Digest]:
        raw = self._first("md5")
        return Digest(Algorithm.MD5, raw) if raw is not None else None

    @property
    def s1(self) -> Optional[Digest]:
        raw = self._first("sha1")
        return Digest(Algorithm.SHA1, raw) if raw is not None else None

    @property
    def s2(self) -> Optional[Digest]:
        raw = self._first("hmac_sha256")
        return Digest(Algorithm.SHA256, raw) if raw is not None else None

    @property
    def s3(self) -> Optional[bytes]:
        return self._first("scrypt")

    @property
    def value(self) -> bytes:
        """Final stage output; the value a credential record stores"""
        return self.outputs[-1].octets

    def __len__(self) -> int:
        return len(self.outputs)
