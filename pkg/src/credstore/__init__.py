"""Credential records and the line-oriented store"""

from .record import CredentialRecord, parse_record, serialize_record, validate_username
from .store import STORE_HEADER, CredentialStore, StoreEntry

__all__ = [
    'CredentialRecord', 'parse_record', 'serialize_record', 'validate_username',
    'STORE_HEADER', 'CredentialStore', 'StoreEntry',
]
