"""
Chain evaluation and verification

Composition rules:
    - the first stage consumes the password encoded per its input_encoding
      (raw octets for every built-in chain);
    - every later stage consumes the previous stage's output, rendered as
      lowercase ASCII hex unless the stage says RAW_BYTES;
    - salted SHA-1 hashes ``sha1_salt || input``; salted SHA-256 likewise
      prefixes the stage's salt;
    - the peppered stage is HMAC-SHA-256 keyed with the pepper;
    - scrypt uses the salt named by the stage's salt role.
"""

from enum import Enum
from typing import TYPE_CHECKING, List, Optional, Tuple, Union

from ..errors import InvalidSpecError, PasswordTooLongError, VersionMismatchError
from ..logger import get_logger
from ..primitives import constant_time_equal, hmac_sha256, md5, scrypt_kdf, sha1, sha256
from .spec import ChainSpec, InputEncoding, Pepper, SaltSet, StageKind, StageOutput, StageSpec, StageTrace

if TYPE_CHECKING:
    from ..credstore.record import CredentialRecord

logger = get_logger(__name__)

MAX_PASSWORD_OCTETS = 4096

Octets = Union[bytes, bytearray, str]


class VerificationOutcome(str, Enum):
    ACCEPT = "accept"
    REJECT = "reject"

    @property
    def accepted(self) -> bool:
        return self is VerificationOutcome.ACCEPT


def to_octets(value: Octets) -> bytes:
    """Passwords given as text are encoded as UTF-8"""
    if isinstance(value, str):
        return value.encode("utf-8")
    return bytes(value)


def _encode_input(previous: bytes, encoding: InputEncoding) -> bytes:
    if encoding is InputEncoding.LOWER_HEX:
        return previous.hex().encode("ascii")
    return previous


def _apply_stage(stage: StageSpec, message: bytes, salts: Optional[SaltSet], pepper: Optional[Pepper]) -> bytes:
    salt = b""
    if stage.salted:
        if salts is None:
            raise InvalidSpecError(f"{stage.name} stage needs per-user salts")
        salt = salts.salt_for(stage.salt_role)

    if stage.kind is StageKind.MD5_PLAIN:
        return md5(message).raw
    if stage.kind is StageKind.SHA1_SALTED:
        return sha1(salt + message).raw
    if stage.kind is StageKind.HMAC_SHA256_PEPPERED:
        if pepper is None:
            raise InvalidSpecError("hmac_sha256 stage needs the service pepper")
        return hmac_sha256(pepper.secret, message).raw
    if stage.kind is StageKind.SCRYPT:
        return scrypt_kdf(message, salt, stage.scrypt)
    if stage.kind is StageKind.SHA256_PLAIN:
        return sha256(salt + message).raw
    raise InvalidSpecError(f"unsupported stage kind: {stage.kind}")


def evaluate_from(
    spec: ChainSpec,
    start: int,
    previous: bytes,
    salts: Optional[SaltSet],
    pepper: Optional[Pepper],
) -> StageTrace:
    """
    Run ``spec`` from stage ``start`` onward

    Args:
        spec: Chain to evaluate
        start: Index of the first stage to run
        previous: Password (start == 0) or the known output of stage start - 1
        salts: Per-user salts, required when any remaining stage is salted
        pepper: Service pepper, required when a peppered stage remains

    Returns:
        Trace holding the outputs of the stages that ran
    """
    if not isinstance(spec, ChainSpec):
        raise InvalidSpecError("spec must be a ChainSpec")
    if not 0 <= start < len(spec.stages):
        raise InvalidSpecError(f"start stage {start} outside chain of {len(spec.stages)} stages")

    outputs: List[StageOutput] = []
    data = bytes(previous)
    for stage in spec.stages[start:]:
        data = _apply_stage(stage, _encode_input(data, stage.input_encoding), salts, pepper)
        outputs.append(StageOutput(stage.name, data))
    return StageTrace(tuple(outputs))


def evaluate_chain(spec: ChainSpec, password: Octets, salts: Optional[SaltSet], pepper: Optional[Pepper]) -> StageTrace:
    """
    Evaluate every stage of ``spec`` on ``password``

    Raises:
        PasswordTooLongError: password longer than MAX_PASSWORD_OCTETS
        InvalidSpecError: malformed spec or missing salts/pepper
    """
    octets = to_octets(password)
    if len(octets) > MAX_PASSWORD_OCTETS:
        raise PasswordTooLongError(f"password exceeds {MAX_PASSWORD_OCTETS} octets")
    return evaluate_from(spec, 0, octets, salts, pepper)


def verify(spec: ChainSpec, candidate: Octets, record: "CredentialRecord", pepper: Optional[Pepper]) -> VerificationOutcome:
    """Accept iff the candidate reproduces the stored value (constant-time compare)"""
    if record.version != spec.version:
        raise VersionMismatchError(f"record is '{record.version}', chain is '{spec.version}'")
    trace = evaluate_chain(spec, candidate, record.salts, pepper)
    if constant_time_equal(trace.value, record.stored_value):
        return VerificationOutcome.ACCEPT
    return VerificationOutcome.REJECT


def stage_trace_hex(trace: StageTrace) -> List[Tuple[str, str]]:
    """(stage-name, lowercase hex) per stage, in order"""
    return [(out.name, out.hex()) for out in trace.outputs]
