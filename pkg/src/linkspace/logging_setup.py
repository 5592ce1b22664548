"""
Logging configuration for linkspace.

Sweeps and sampling runs are chatty, so detail goes to a rotating file under
~/.linkspace/logs/ while stderr only carries warnings by default. stdout is
reserved for machine-readable reports and never receives log records.
"""

from __future__ import annotations

import gzip
import logging
from logging.handlers import RotatingFileHandler
import os
from pathlib import Path
import shutil

from .utils.env_vars import get_int_env

LOG_FILE_NAME = "linkspace.log"


class GzipRotatingFileHandler(RotatingFileHandler):
    """Size-rotated log file whose backups are gzip-compressed."""

    def __init__(self, path: Path, *, max_mb: int, backups: int) -> None:
        super().__init__(
            path,
            maxBytes=max_mb * 1024 * 1024,
            backupCount=backups,
            encoding="utf-8",
        )
        self.namer = lambda name: f"{name}.gz"
        self.rotator = _gzip_rotate


def _gzip_rotate(source: str, dest: str) -> None:
    with open(source, "rb") as src, gzip.open(dest, "wb") as dst:
        shutil.copyfileobj(src, dst)
    try:
        os.remove(source)
    except FileNotFoundError:
        pass


def level_from_env(name: str, default: int) -> int:
    """Level named by env var `name` (e.g. "DEBUG"); unknown names give `default`."""
    raw = os.getenv(name)
    if not raw:
        return default
    level = logging.getLevelName(raw.strip().upper())
    return level if isinstance(level, int) else default


def configure_logging(command: str | None = None) -> Path:
    """
    Route linkspace logging to a rotating file and a quiet stderr handler.

    Args:
        command: Subcommand being run; tags every record of this process.

    Returns:
        Path to the primary log file.
    """
    from .paths import resolve_data_dir

    log_dir = resolve_data_dir() / "logs"
    log_dir.mkdir(parents=True, exist_ok=True)
    log_path = log_dir / LOG_FILE_NAME

    file_handler = GzipRotatingFileHandler(
        log_path,
        max_mb=get_int_env("LINKSPACE_LOG_MAX_SIZE_MB", default=10, min_value=1),
        backups=get_int_env("LINKSPACE_LOG_BACKUP_COUNT", default=5, min_value=1),
    )
    tag = f"[{command}] " if command else ""
    fmt = logging.Formatter(f"%(asctime)s - %(name)s - %(levelname)s - {tag}%(message)s")
    file_handler.setFormatter(fmt)

    root = logging.getLogger()
    root.setLevel(level_from_env("LINKSPACE_LOG_LEVEL", logging.INFO))

    # Replace existing handlers so repeated CLI invocations don't duplicate output.
    for handler in list(root.handlers):
        root.removeHandler(handler)
        handler.close()
    root.addHandler(file_handler)

    stderr_handler = logging.StreamHandler()
    stderr_handler.setLevel(level_from_env("LINKSPACE_STDERR_LOG_LEVEL", logging.WARNING))
    stderr_handler.setFormatter(fmt)
    root.addHandler(stderr_handler)

    # numpy/scipy warnings go to the log file only.
    logging.captureWarnings(True)
    logging.getLogger("py.warnings").propagate = False
    logging.getLogger("py.warnings").handlers[:] = [file_handler]

    logging.getLogger("linkspace").info("linkspace %s started (pid %d)", command or "-", os.getpid())
    return log_path


__all__ = ["GzipRotatingFileHandler", "LOG_FILE_NAME", "configure_logging", "level_from_env"]
