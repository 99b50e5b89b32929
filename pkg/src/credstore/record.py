"""
Credential records and their line format

    username:$onion$<version>$s1=<b64(sha1_salt)>,s2=<b64(scrypt_salt)>$<b64(stored_value)>

Base64 is the standard alphabet with padding kept. Chains without salts
(the legacy ``md5`` version) leave the parameter section empty. Parsing is
strict: no whitespace, no case folding, fixed field order.
"""

import base64
import binascii
import re
from dataclasses import dataclass
from typing import Optional

from ..chains import SaltSet, get_chain
from ..chains.registry import has_chain
from ..chains.spec import VERSION_PATTERN, validate_version
from ..errors import InvalidRecordError, InvalidSpecError, MalformedLineError, UnknownVersionError

ONION_TAG = "$onion$"
MAX_USERNAME_OCTETS = 64

_LINE = re.compile(
    r"(?P<username>[^:\n\r]+):\$onion\$"
    r"(?P<version>" + VERSION_PATTERN.pattern + r")"
    r"\$(?P<params>[^$]*)\$(?P<value>[^$]*)"
)
_PARAMS = re.compile(r"s1=(?P<s1>[^,]*),s2=(?P<s2>[^,]*)")


def validate_username(username: str) -> str:
    if not isinstance(username, str) or not username:
        raise InvalidRecordError("username must be a non-empty string")
    if any(c in username for c in ":\n\r"):
        raise InvalidRecordError("username must not contain ':' or newlines")
    if len(username.encode("utf-8")) > MAX_USERNAME_OCTETS:
        raise InvalidRecordError(f"username exceeds {MAX_USERNAME_OCTETS} UTF-8 octets")
    return username


@dataclass(frozen=True)
class CredentialRecord:
    """What the store keeps per user: salts and the final chain value, nothing else"""

    username: str
    version: str
    salts: Optional[SaltSet]
    stored_value: bytes

    def __post_init__(self):
        validate_username(self.username)
        if not self.stored_value:
            raise InvalidRecordError("stored_value must not be empty")
        if has_chain(self.version):
            spec = get_chain(self.version)
            if len(self.stored_value) != spec.output_octets:
                raise InvalidRecordError(
                    f"stored_value is {len(self.stored_value)} octets, chain '{self.version}' outputs {spec.output_octets}"
                )
            if spec.requires_salts and self.salts is None:
                raise InvalidRecordError(f"chain '{self.version}' requires salts")
            if not spec.requires_salts and self.salts is not None:
                raise InvalidRecordError(f"chain '{self.version}' is unsalted")


def _b64(data: bytes) -> str:
    return base64.b64encode(data).decode("ascii")


def _unb64(text: str, field: str, position: int, expected_len: Optional[int] = None) -> bytes:
    try:
        data = base64.b64decode(text, validate=True)
    except (binascii.Error, ValueError) as e:
        raise MalformedLineError(f"{field}: invalid base64", position=position) from e
    # Reject non-canonical encodings so parse/serialize stays an identity
    if not text or _b64(data) != text:
        raise MalformedLineError(f"{field}: non-canonical base64", position=position)
    if expected_len is not None and len(data) != expected_len:
        raise MalformedLineError(f"{field}: expected {expected_len} octets, got {len(data)}", position=position)
    return data


def serialize_record(record: CredentialRecord) -> str:
    """Render one record as a store line (no trailing newline)"""
    if not isinstance(record, CredentialRecord):
        raise InvalidRecordError("serialize_record expects a CredentialRecord")
    validate_username(record.username)
    try:
        validate_version(record.version)
    except InvalidSpecError as e:
        raise InvalidRecordError(str(e)) from e
    params = ""
    if record.salts is not None:
        params = f"s1={_b64(record.salts.sha1_salt)},s2={_b64(record.salts.scrypt_salt)}"
    return f"{record.username}:{ONION_TAG}{record.version}${params}${_b64(record.stored_value)}"


def parse_record(line: str) -> CredentialRecord:
    """
    Strict inverse of serialize_record

    Args:
        line: One store line without its newline

    Returns:
        Parsed record

    Raises:
        MalformedLineError: structural problem, with the column where it was found
        UnknownVersionError: well-formed line naming a chain this build cannot verify
    """
    match = _LINE.fullmatch(line)
    if match is None:
        position = line.find(":")
        if position < 0:
            raise MalformedLineError("missing ':' after username", position=0)
        if not line.startswith(ONION_TAG, position + 1):
            raise MalformedLineError("missing $onion$ tag", position=position + 1)
        raise MalformedLineError("malformed record", position=position + 1)

    username = match.group("username")
    if len(username.encode("utf-8")) > MAX_USERNAME_OCTETS:
        raise MalformedLineError("username too long", position=0)

    version = match.group("version")
    # salt widths belong to the chain; unknown versions only get the structural checks
    known = has_chain(version)

    params_text = match.group("params")
    salts = None
    if params_text:
        params = _PARAMS.fullmatch(params_text)
        if params is None:
            raise MalformedLineError("salt section must be s1=...,s2=...", position=match.start("params"))
        base = match.start("params")
        sha1_salt = _unb64(params.group("s1"), "s1", base + params.start("s1"), 20 if known else None)
        scrypt_salt = _unb64(params.group("s2"), "s2", base + params.start("s2"), 32 if known else None)
        if known:
            salts = SaltSet(sha1_salt, scrypt_salt)

    stored_value = _unb64(match.group("value"), "value", match.start("value"))

    if not known:
        raise UnknownVersionError(version, username=username)

    try:
        return CredentialRecord(username=username, version=version, salts=salts, stored_value=stored_value)
    except InvalidRecordError as e:
        raise MalformedLineError(str(e), position=match.start("value")) from e
