"""
Exception hierarchy for onionhash

Every error carries a stable ``code`` string. The CLI maps these to exit
codes and authd maps them to HTTP statuses, so codes must not change.
"""

from typing import Optional


class OnionHashError(Exception):
    """Base class for all onionhash errors"""

    code = "error"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)
        self.message = message or self.code


class InvalidParamsError(OnionHashError, ValueError):
    code = "invalid_params"


class InvalidSpecError(OnionHashError, ValueError):
    code = "invalid_spec"


class PasswordTooLongError(OnionHashError, ValueError):
    code = "password_too_long"


class VersionMismatchError(OnionHashError):
    code = "version_mismatch"


class MalformedHexError(OnionHashError, ValueError):
    code = "malformed_hex"


class IncompatibleSpecError(OnionHashError):
    code = "incompatible_spec"


class InvalidRecordError(OnionHashError, ValueError):
    code = "invalid_record"


class MalformedLineError(OnionHashError, ValueError):
    """A store or import line failed strict parsing"""

    code = "malformed_line"

    def __init__(self, message: str, position: Optional[int] = None, line_number: Optional[int] = None):
        self.reason = message
        self.position = position
        self.line_number = line_number
        where = []
        if line_number is not None:
            where.append(f"line {line_number}")
        if position is not None:
            where.append(f"col {position}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(f"{prefix}{message}")


class UnknownVersionError(OnionHashError):
    """Record parsed structurally but names a chain version we cannot evaluate"""

    code = "unknown_version"

    def __init__(self, version: str, username: Optional[str] = None):
        self.version = version
        self.username = username
        super().__init__(f"unknown chain version '{version}'")


class DuplicateUsernameError(OnionHashError):
    code = "duplicate_username"


class UnknownUserError(OnionHashError):
    code = "unknown_user"


class StoreIOError(OnionHashError, OSError):
    code = "store_io"


class IdenticalInputsError(OnionHashError, ValueError):
    code = "identical_inputs"


class OutOfRangeError(OnionHashError, ValueError):
    code = "out_of_range"


class UnknownChainError(OnionHashError, KeyError):
    code = "unknown_chain"

    def __str__(self) -> str:
        return self.message


class PepperError(OnionHashError):
    code = "pepper"


class BindError(OnionHashError):
    code = "bind_failure"


class NetworkError(OnionHashError):
    code = "network_failure"


class PropagationFailure(OnionHashError):
    code = "propagation_failure"
