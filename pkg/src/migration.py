"""
Migration-in-place of legacy MD5 stores

A legacy store holds ``hex(md5(pw))`` per user. Wrapping feeds that digest
into a longer chain at stage 1, producing exactly the value the full chain
would produce from the plaintext, without ever knowing the plaintext.

Only chains whose first stage is unsalted MD5 can be entered this way: any
later entry point would sit behind a salted stage whose salt the legacy
store never had.
"""

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from .chains import (
    LEGACY_MD5_VERSION,
    ChainSpec,
    InputEncoding,
    Pepper,
    SaltSet,
    StageKind,
    evaluate_from,
)
from .credstore import CredentialRecord, CredentialStore
from .errors import IncompatibleSpecError, MalformedHexError, MalformedLineError, OnionHashError, StoreIOError
from .logger import get_logger
from .primitives import Algorithm, Digest

logger = get_logger(__name__)


class LegacyKind(str, Enum):
    MD5_HEX = "md5hex"


@dataclass(frozen=True)
class LegacyRecord:
    username: str
    legacy_value: str
    legacy_kind: LegacyKind = LegacyKind.MD5_HEX

    def __post_init__(self):
        if self.legacy_kind is not LegacyKind.MD5_HEX:
            raise IncompatibleSpecError(f"unsupported legacy kind {self.legacy_kind}")
        # raises MalformedHexError
        Digest.from_hex(Algorithm.MD5, self.legacy_value)

    @property
    def digest(self) -> Digest:
        return Digest.from_hex(Algorithm.MD5, self.legacy_value)

    def to_credential_record(self) -> CredentialRecord:
        """The same digest as a ``md5``-version store record"""
        return CredentialRecord(
            username=self.username, version=LEGACY_MD5_VERSION, salts=None, stored_value=self.digest.raw
        )

    @classmethod
    def from_credential_record(cls, record: CredentialRecord) -> "LegacyRecord":
        if record.version != LEGACY_MD5_VERSION:
            raise IncompatibleSpecError(f"record for {record.username} is '{record.version}', not legacy md5")
        return cls(username=record.username, legacy_value=record.stored_value.hex())


@dataclass
class MigrationReport:
    migrated: int = 0
    skipped: int = 0
    failed: int = 0
    errors: List[str] = field(default_factory=list)

    def as_pairs(self) -> List[Tuple[str, int]]:
        return [("migrated", self.migrated), ("skipped", self.skipped), ("failed", self.failed)]

    def render(self) -> str:
        return " ".join(f"{k}={v}" for k, v in self.as_pairs())


def _check_wrap_target(spec: ChainSpec) -> None:
    first = spec.stages[0]
    if first.kind is not StageKind.MD5_PLAIN or first.input_encoding is not InputEncoding.RAW_BYTES:
        raise IncompatibleSpecError(f"chain '{spec.version}' does not start with plain MD5; cannot wrap legacy digests")


def wrap_legacy(legacy: LegacyRecord, salts: Optional[SaltSet], pepper: Optional[Pepper], spec: ChainSpec) -> CredentialRecord:
    """
    Wrap a legacy MD5 digest into ``spec``

    Args:
        legacy: Legacy record (validated hex)
        salts: Salts for the new record
        pepper: Service pepper
        spec: Target chain; its first stage must be plain MD5

    Returns:
        Record whose stored_value equals evaluate_chain(spec, pw, salts, pepper).value
        for every pw with hex(md5(pw)) == legacy.legacy_value

    Raises:
        MalformedHexError: legacy value is not 32 lowercase hex characters
        IncompatibleSpecError: spec cannot be entered after an MD5 stage
    """
    if not isinstance(legacy, LegacyRecord):
        raise IncompatibleSpecError("wrap_legacy expects a LegacyRecord")
    _check_wrap_target(spec)
    if len(spec.stages) == 1:
        value = legacy.digest.raw
    else:
        value = evaluate_from(spec, 1, legacy.digest.raw, salts, pepper).value
    return CredentialRecord(
        username=legacy.username,
        version=spec.version,
        salts=salts if spec.requires_salts else None,
        stored_value=value,
    )


def upgrade_store(
    store: CredentialStore,
    spec_from: ChainSpec,
    spec_to: ChainSpec,
    pepper: Optional[Pepper],
    salt_factory: Callable[[], SaltSet] = SaltSet.generate,
) -> MigrationReport:
    """
    Rewrite every ``spec_from`` record as a wrapped ``spec_to`` record

    Runs under the store's exclusive writer lease and commits with one atomic
    rewrite. Records that fail to wrap stay as they were. Running it twice
    is the same as running it once.

    Raises:
        IncompatibleSpecError: unsupported chain pair, or a record on any other version
        StoreIOError: the store could not be read or written
    """
    if [s.kind for s in spec_from.stages] != [StageKind.MD5_PLAIN]:
        raise IncompatibleSpecError(f"only legacy md5 stores can be upgraded, not '{spec_from.version}'")
    _check_wrap_target(spec_to)

    report = MigrationReport()
    allowed = {spec_from.version, spec_to.version}
    with store.edit() as entries:
        stray = sorted({e.version for e in entries.values() if e.version not in allowed})
        if stray:
            raise IncompatibleSpecError(f"store holds versions outside {sorted(allowed)}: {stray}")

        for username, entry in list(entries.items()):
            if entry.version == spec_to.version:
                report.skipped += 1
                continue
            try:
                legacy = LegacyRecord.from_credential_record(entry.record)
                wrapped = wrap_legacy(legacy, salt_factory(), pepper, spec_to)
            except OnionHashError as e:
                report.failed += 1
                report.errors.append(f"{username}: {e}")
                logger.warning(f"Migration failed for {username}: {e.code}")
                continue
            entries[username] = store.entry_for(wrapped)
            report.migrated += 1

    logger.info(f"Store upgrade {spec_from.version} -> {spec_to.version}: {report.render()}")
    return report


def parse_legacy_lines(lines: Iterable[str]) -> Tuple[List[LegacyRecord], List[MalformedLineError]]:
    """
    Parse ``username:md5hex`` lines

    A username seen on an earlier line makes the later line an error.

    Returns:
        (records, errors); each error carries its 1-based line number
    """
    records: List[LegacyRecord] = []
    errors: List[MalformedLineError] = []
    first_seen: Dict[str, int] = {}
    for number, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line:
            continue
        username, sep, value = line.rpartition(":")
        try:
            if not sep or not username:
                raise MalformedLineError("expected username:md5hex", position=0)
            if username in first_seen:
                raise MalformedLineError(
                    f"duplicate username '{username}' (first on line {first_seen[username]})", position=0
                )
            records.append(LegacyRecord(username=username, legacy_value=value))
            first_seen[username] = number
        except MalformedLineError as e:
            errors.append(MalformedLineError(e.reason, position=e.position, line_number=number))
        except MalformedHexError as e:
            errors.append(MalformedLineError(e.message, position=len(username) + 1, line_number=number))
        except OnionHashError as e:
            errors.append(MalformedLineError(e.message, line_number=number))
    return records, errors


def import_legacy_file(
    path,
    store: CredentialStore,
    spec: ChainSpec,
    pepper: Optional[Pepper],
    salt_factory: Callable[[], SaltSet] = SaltSet.generate,
) -> MigrationReport:
    """
    Import a legacy ``username:md5hex`` file straight into ``spec`` records

    Malformed lines count as failed; users already on ``spec`` are skipped.
    Valid lines are committed even when others fail.
    """
    _check_wrap_target(spec)
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise StoreIOError(f"cannot read legacy file {path}: {e}") from e

    legacy_records, line_errors = parse_legacy_lines(text.split("\n"))
    report = MigrationReport(failed=len(line_errors), errors=[str(e) for e in line_errors])

    with store.edit() as entries:
        for legacy in legacy_records:
            existing = entries.get(legacy.username)
            if existing is not None and existing.version == spec.version:
                report.skipped += 1
                continue
            if existing is not None and existing.version != LEGACY_MD5_VERSION:
                report.failed += 1
                report.errors.append(f"{legacy.username}: already present as '{existing.version}'")
                continue
            try:
                wrapped = wrap_legacy(legacy, salt_factory(), pepper, spec)
            except OnionHashError as e:
                report.failed += 1
                report.errors.append(f"{legacy.username}: {e}")
                continue
            entries[legacy.username] = store.entry_for(wrapped)
            report.migrated += 1

    logger.info(f"Legacy import into {spec.version}: {report.render()}")
    return report
