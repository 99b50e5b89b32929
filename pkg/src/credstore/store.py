"""
Single-file credential store

File layout (UTF-8, LF):

    #onionstore v1
    <record line>
    ...

Every mutation rewrites the whole file through an atomic rename, so readers
never see a partial store. Writers serialize on an advisory ``flock`` held
on a sidecar ``<store>.lock`` file; readers take no lock.
"""

import fcntl
import secrets
import threading
from collections import OrderedDict
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Tuple

from ..chains import (
    FB2014_VERSION,
    ChainSpec,
    Octets,
    Pepper,
    SaltSet,
    VerificationOutcome,
    evaluate_chain,
    get_chain,
    verify,
)
from ..errors import (
    DuplicateUsernameError,
    MalformedLineError,
    PasswordTooLongError,
    StoreIOError,
    UnknownChainError,
    UnknownUserError,
    UnknownVersionError,
)
from ..logger import get_logger
from ..utils.files import atomic_write_text
from .record import CredentialRecord, parse_record, serialize_record, validate_username

logger = get_logger(__name__)

STORE_HEADER = "#onionstore v1"


@dataclass
class StoreEntry:
    """One line of the store; ``record`` is None for versions this build cannot verify"""

    username: str
    version: str
    line: str
    record: Optional[CredentialRecord]


class CredentialStore:
    """
    Credential records persisted in one line-oriented file

    Args:
        path: Store file
        chains: Overrides for version -> ChainSpec resolution (falls back to the registry)
        default_chain: Version used for new accounts and for unknown-user dummy checks
        salt_factory: Source of fresh per-user salts
    """

    def __init__(
        self,
        path,
        chains: Optional[Mapping[str, ChainSpec]] = None,
        default_chain: str = FB2014_VERSION,
        salt_factory: Callable[[], SaltSet] = SaltSet.generate,
    ):
        self.path = Path(path)
        self.lock_path = self.path.with_name(self.path.name + ".lock")
        self._chains: Dict[str, ChainSpec] = dict(chains or {})
        self._salt_factory = salt_factory
        self._thread_lock = threading.RLock()
        self.default_spec = self.chain_for(default_chain)
        self._dummy: Optional[CredentialRecord] = None

    @classmethod
    def open(cls, path, create: bool = False, **kwargs) -> "CredentialStore":
        """
        Open an existing store, or create an empty one when ``create`` is set

        Raises:
            StoreIOError: store missing (and not created) or unreadable
        """
        store = cls(path, **kwargs)
        if not store.path.exists():
            if not create:
                raise StoreIOError(f"store not found: {store.path}")
            with store._writer_lease():
                if not store.path.exists():
                    store._dump(OrderedDict())
                    logger.info(f"Created empty credential store at {store.path}")
        else:
            store._load()
        return store

    # ------------------------------------------------------------------ #
    # File handling
    # ------------------------------------------------------------------ #
    def chain_for(self, version: str) -> ChainSpec:
        if version in self._chains:
            return self._chains[version]
        return get_chain(version)

    def _load(self) -> "OrderedDict[str, StoreEntry]":
        try:
            text = self.path.read_text(encoding="utf-8")
        except FileNotFoundError as e:
            raise StoreIOError(f"store not found: {self.path}") from e
        except (OSError, UnicodeDecodeError) as e:
            raise StoreIOError(f"cannot read store {self.path}: {e}") from e

        lines = text.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        if not lines or lines[0] != STORE_HEADER:
            raise MalformedLineError(f"expected header '{STORE_HEADER}'", line_number=1)

        entries: "OrderedDict[str, StoreEntry]" = OrderedDict()
        for number, line in enumerate(lines[1:], start=2):
            try:
                record = parse_record(line)
                username, version = record.username, record.version
            except UnknownVersionError as e:
                record = None
                username, version = e.username, e.version
            except MalformedLineError as e:
                raise MalformedLineError(e.reason, position=e.position, line_number=number) from e
            if username in entries:
                raise MalformedLineError(f"duplicate username '{username}'", line_number=number)
            entries[username] = StoreEntry(username, version, line, record)
        return entries

    def _dump(self, entries: "OrderedDict[str, StoreEntry]") -> None:
        text = STORE_HEADER + "\n" + "".join(f"{entry.line}\n" for entry in entries.values())
        try:
            atomic_write_text(self.path, text)
        except OSError as e:
            raise StoreIOError(f"cannot write store {self.path}: {e}") from e

    @contextmanager
    def _writer_lease(self) -> Iterator[None]:
        """Exclusive writer lease: in-process lock plus an advisory file lock"""
        with self._thread_lock:
            try:
                self.lock_path.parent.mkdir(parents=True, exist_ok=True)
                handle = open(self.lock_path, "a")
            except OSError as e:
                raise StoreIOError(f"cannot open lock file {self.lock_path}: {e}") from e
            try:
                fcntl.flock(handle.fileno(), fcntl.LOCK_EX)
                yield
            finally:
                fcntl.flock(handle.fileno(), fcntl.LOCK_UN)
                handle.close()

    @contextmanager
    def edit(self) -> Iterator["OrderedDict[str, StoreEntry]"]:
        """
        Load, mutate and atomically rewrite the store under the writer lease

        The file is rewritten only if the block exits without an exception.
        A missing store starts out empty and is created by the rewrite.
        """
        with self._writer_lease():
            entries = self._load() if self.path.exists() else OrderedDict()
            yield entries
            self._dump(entries)

    # ------------------------------------------------------------------ #
    # Queries
    # ------------------------------------------------------------------ #
    def get(self, username: str) -> Optional[CredentialRecord]:
        entry = self._load().get(username)
        return entry.record if entry else None

    def records(self) -> List[CredentialRecord]:
        return [e.record for e in self._load().values() if e.record is not None]

    def list_records(self) -> List[Tuple[str, str, bool]]:
        """(username, version, verifiable) per line, including unknown versions"""
        return [(e.username, e.version, e.record is not None) for e in self._load().values()]

    def __len__(self) -> int:
        return len(self._load())

    @staticmethod
    def entry_for(record: CredentialRecord) -> StoreEntry:
        return StoreEntry(record.username, record.version, serialize_record(record), record)

    # ------------------------------------------------------------------ #
    # Account operations
    # ------------------------------------------------------------------ #
    def make_record(
        self,
        username: str,
        password: Octets,
        spec: ChainSpec,
        pepper: Optional[Pepper],
        salts: Optional[SaltSet] = None,
    ) -> CredentialRecord:
        """Evaluate ``spec`` with fresh salts and build the record (no I/O)"""
        if spec.requires_salts:
            salts = salts or self._salt_factory()
        else:
            salts = None
        trace = evaluate_chain(spec, password, salts, pepper)
        return CredentialRecord(username=username, version=spec.version, salts=salts, stored_value=trace.value)

    def create_account(
        self,
        username: str,
        password: Octets,
        spec: Optional[ChainSpec] = None,
        pepper: Optional[Pepper] = None,
        salts: Optional[SaltSet] = None,
    ) -> CredentialRecord:
        """
        Register a new user; the record is durably on disk when this returns

        Raises:
            DuplicateUsernameError: username already present
            StoreIOError: store could not be read or written
        """
        validate_username(username)
        spec = spec or self.default_spec
        if self.path.exists() and username in self._load():
            raise DuplicateUsernameError(f"user '{username}' already exists")

        record = self.make_record(username, password, spec, pepper, salts)
        with self.edit() as entries:
            if username in entries:
                raise DuplicateUsernameError(f"user '{username}' already exists")
            entries[username] = self.entry_for(record)
        logger.info(f"Account created: user={username} chain={spec.version}")
        return record

    def _dummy_record(self) -> CredentialRecord:
        if self._dummy is None:
            spec = self.default_spec
            self._dummy = CredentialRecord(
                username="~dummy",
                version=spec.version,
                salts=SaltSet.generate() if spec.requires_salts else None,
                stored_value=secrets.token_bytes(spec.output_octets),
            )
        return self._dummy

    def _dummy_check(self, candidate: Octets, pepper: Optional[Pepper]) -> None:
        verify(self.default_spec, candidate, self._dummy_record(), pepper)

    def authenticate(self, username: str, candidate: Octets, pepper: Optional[Pepper]) -> VerificationOutcome:
        """
        Check ``candidate`` for ``username``; read-only

        Unknown users, unverifiable records and over-long candidates are all
        rejected after a full chain evaluation against a dummy record, so
        every path costs the same and only StoreIOError can escape.
        """
        entry = self._load().get(username)
        try:
            outcome = self._check(username, entry, candidate, pepper)
        except PasswordTooLongError:
            # the length check fires before any hashing; spend the same work anyway
            self._dummy_check(b"", pepper)
            outcome = VerificationOutcome.REJECT
        logger.info(f"Authentication {outcome.value}: user={username}")
        return outcome

    def _check(
        self, username: str, entry: Optional[StoreEntry], candidate: Octets, pepper: Optional[Pepper]
    ) -> VerificationOutcome:
        if entry is None or entry.record is None:
            self._dummy_check(candidate, pepper)
            if entry is not None:
                logger.warning(f"User {username} has unverifiable chain version '{entry.version}'")
            return VerificationOutcome.REJECT

        record = entry.record
        try:
            spec = self.chain_for(record.version)
        except UnknownChainError:
            self._dummy_check(candidate, pepper)
            return VerificationOutcome.REJECT
        return verify(spec, candidate, record, pepper)

    def set_password(
        self,
        username: str,
        new_password: Octets,
        pepper: Optional[Pepper],
        spec: Optional[ChainSpec] = None,
    ) -> CredentialRecord:
        """
        Replace a user's record with one derived from fresh salts

        Raises:
            UnknownUserError: user not present
            StoreIOError: store could not be read or written
        """
        if username not in self._load():
            raise UnknownUserError(f"user '{username}' does not exist")
        spec = spec or self.default_spec
        record = self.make_record(username, new_password, spec, pepper)
        with self.edit() as entries:
            if username not in entries:
                raise UnknownUserError(f"user '{username}' does not exist")
            entries[username] = self.entry_for(record)
        logger.info(f"Password changed: user={username} chain={spec.version}")
        return record
