"""
Hash primitives used by the chain stages

Thin adapters over hashlib/hmac and the ``cryptography`` scrypt KDF. The
contract of this module is bit-exact input/output; tests pin it to the
RFC 1321, FIPS 180-4, RFC 4231 and RFC 7914 vectors.

MD5 and SHA-1 are provided on purpose to model legacy stores. They are
listed in ``LEGACY_ALGORITHMS``, which the compliance analyzer reads.
"""

import hashlib
import hmac
from dataclasses import dataclass
from enum import Enum

from cryptography.hazmat.primitives.kdf.scrypt import Scrypt

from .errors import InvalidParamsError, MalformedHexError


class Algorithm(str, Enum):
    MD5 = "md5"
    SHA1 = "sha1"
    SHA256 = "sha256"

    @property
    def digest_size(self) -> int:
        return _DIGEST_SIZES[self]

    @property
    def bits(self) -> int:
        return self.digest_size * 8


_DIGEST_SIZES = {Algorithm.MD5: 16, Algorithm.SHA1: 20, Algorithm.SHA256: 32}

# Deprecated for security use; kept only to model legacy systems.
LEGACY_ALGORITHMS = frozenset({Algorithm.MD5, Algorithm.SHA1})


@dataclass(frozen=True)
class Digest:
    """Fixed-width hash output tagged with its algorithm"""

    algorithm: Algorithm
    raw: bytes

    def __post_init__(self):
        if len(self.raw) != self.algorithm.digest_size:
            raise InvalidParamsError(
                f"{self.algorithm.value} digest must be {self.algorithm.digest_size} octets, got {len(self.raw)}"
            )

    def hex(self) -> str:
        """Lowercase hex, no prefix, zero padded"""
        return self.raw.hex()

    @property
    def bits(self) -> int:
        return self.algorithm.bits

    @classmethod
    def from_hex(cls, algorithm: Algorithm, text: str) -> "Digest":
        """
        Parse the canonical lowercase hex rendering of a digest

        Args:
            algorithm: Algorithm the digest belongs to
            text: Lowercase hex string of exactly 2 * digest_size characters

        Returns:
            Digest instance

        Raises:
            MalformedHexError: wrong length, uppercase or non-hex characters
        """
        expected = algorithm.digest_size * 2
        if len(text) != expected or any(c not in "0123456789abcdef" for c in text):
            raise MalformedHexError(f"expected {expected} lowercase hex characters for {algorithm.value}")
        return cls(algorithm, bytes.fromhex(text))

    def __str__(self) -> str:
        return self.hex()


@dataclass(frozen=True)
class ScryptParams:
    """scrypt cost parameters, validated on construction"""

    n: int
    r: int
    p: int
    dk_len: int

    def __post_init__(self):
        if self.n <= 1 or self.n & (self.n - 1):
            raise InvalidParamsError(f"scrypt n must be a power of two greater than 1, got {self.n}")
        if self.r < 1 or self.p < 1:
            raise InvalidParamsError("scrypt r and p must be >= 1")
        if self.r * self.p >= 2 ** 30:
            raise InvalidParamsError("scrypt r * p must be < 2^30")
        if self.dk_len < 16:
            raise InvalidParamsError(f"scrypt dk_len must be >= 16 octets, got {self.dk_len}")

    @property
    def memory_bytes(self) -> int:
        """Approximate working memory of one evaluation"""
        return 128 * self.r * self.n


def md5(message: bytes) -> Digest:
    return Digest(Algorithm.MD5, hashlib.md5(message, usedforsecurity=False).digest())


def sha1(message: bytes) -> Digest:
    return Digest(Algorithm.SHA1, hashlib.sha1(message, usedforsecurity=False).digest())


def sha256(message: bytes) -> Digest:
    return Digest(Algorithm.SHA256, hashlib.sha256(message).digest())


def hmac_sha256(key: bytes, message: bytes) -> Digest:
    """HMAC-SHA-256 tag; an empty key is permitted"""
    return Digest(Algorithm.SHA256, hmac.new(key, message, hashlib.sha256).digest())


def scrypt_kdf(password: bytes, salt: bytes, params: ScryptParams) -> bytes:
    """
    Derive ``params.dk_len`` octets with scrypt

    Args:
        password: Password octets
        salt: Salt octets (may be empty)
        params: Validated cost parameters

    Returns:
        Derived key
    """
    if not isinstance(params, ScryptParams):
        raise InvalidParamsError("params must be ScryptParams")
    kdf = Scrypt(salt=salt, length=params.dk_len, n=params.n, r=params.r, p=params.p)
    return kdf.derive(password)


def constant_time_equal(left: bytes, right: bytes) -> bool:
    return hmac.compare_digest(left, right)
