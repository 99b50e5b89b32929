"""
Crash-safe file writes

A reader of ``path`` sees either the old or the new content, never a mix:
content goes to a temp file in the same directory, is fsynced, then
renamed over the target.
"""

import os
import tempfile
from pathlib import Path

from ..logger import get_logger
from .config import ensure_directory

logger = get_logger(__name__)


def _fsync_directory(directory: Path) -> None:
    try:
        fd = os.open(directory, os.O_RDONLY)
    except OSError:
        return
    try:
        os.fsync(fd)
    except OSError:
        pass
    finally:
        os.close(fd)


def atomic_write_text(path, text: str, encoding: str = "utf-8") -> None:
    """
    Replace ``path`` with ``text`` atomically

    Args:
        path: Target file
        text: Full new content
        encoding: Text encoding

    Raises:
        OSError: any failure; the target is left untouched
    """
    target = Path(path)
    ensure_directory(target.parent)

    fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", suffix=".tmp", dir=target.parent)
    try:
        with os.fdopen(fd, "w", encoding=encoding, newline="\n") as f:
            f.write(text)
            f.flush()
            os.fsync(f.fileno())
        if target.exists():
            os.chmod(tmp_name, target.stat().st_mode & 0o777)
        else:
            os.chmod(tmp_name, 0o600)
        os.replace(tmp_name, target)
    except BaseException:
        logger.error(f"Atomic write to {target} failed; original left in place")
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise
    _fsync_directory(target.parent)
