"""Tests for linkspace logging configuration."""

from __future__ import annotations

import gzip
import logging
from pathlib import Path

import pytest

from linkspace.logging_setup import (
    LOG_FILE_NAME,
    GzipRotatingFileHandler,
    configure_logging,
    level_from_env,
)


@pytest.fixture(autouse=True)
def restore_logging():
    """Undo configure_logging's global changes."""
    root = logging.getLogger()
    saved, level = list(root.handlers), root.level
    yield
    for handler in list(root.handlers):
        root.removeHandler(handler)
        handler.close()
    for handler in saved:
        root.addHandler(handler)
    root.setLevel(level)
    logging.captureWarnings(False)
    logging.getLogger("py.warnings").handlers.clear()
    logging.getLogger("py.warnings").propagate = True


class TestLevelFromEnv:
    """Tests for level_from_env."""

    def test_unset_gives_default(self, monkeypatch: pytest.MonkeyPatch):
        """A missing variable gives the default."""
        monkeypatch.delenv("LINKSPACE_LOG_LEVEL", raising=False)
        assert level_from_env("LINKSPACE_LOG_LEVEL", logging.INFO) == logging.INFO

    def test_case_insensitive(self, monkeypatch: pytest.MonkeyPatch):
        """Level names are case-insensitive."""
        monkeypatch.setenv("LINKSPACE_LOG_LEVEL", "debug")
        assert level_from_env("LINKSPACE_LOG_LEVEL", logging.INFO) == logging.DEBUG

    def test_unknown_name(self, monkeypatch: pytest.MonkeyPatch):
        """Unknown names fall back to the default."""
        monkeypatch.setenv("LINKSPACE_LOG_LEVEL", "chatty")
        assert level_from_env("LINKSPACE_LOG_LEVEL", logging.WARNING) == logging.WARNING


class TestConfigureLogging:
    """Tests for configure_logging."""

    def test_log_file_under_data_dir(self, tmp_path: Path):
        """Records land in LINKSPACE_HOME/logs tagged with the command."""
        log_path = configure_logging("gamma-set")
        assert log_path == tmp_path / "home" / "logs" / LOG_FILE_NAME
        logging.getLogger("linkspace.k33_extension").info("sweep done")
        for handler in logging.getLogger().handlers:
            handler.flush()
        text = log_path.read_text()
        assert "[gamma-set] linkspace gamma-set started" in text
        assert "[gamma-set] sweep done" in text

    def test_repeated_calls_do_not_duplicate(self):
        """Handlers are replaced, not stacked."""
        configure_logging("realize")
        configure_logging("realize")
        assert len(logging.getLogger().handlers) == 2

    def test_stderr_level_from_env(self, monkeypatch: pytest.MonkeyPatch):
        """LINKSPACE_STDERR_LOG_LEVEL sets the stderr threshold."""
        monkeypatch.setenv("LINKSPACE_STDERR_LOG_LEVEL", "ERROR")
        configure_logging()
        stream = [
            h for h in logging.getLogger().handlers if not isinstance(h, GzipRotatingFileHandler)
        ]
        assert [h.level for h in stream] == [logging.ERROR]


def test_rotation_compresses_backups(tmp_path: Path):
    """Rotated files are gzip-compressed copies of the old log."""
    handler = GzipRotatingFileHandler(tmp_path / "x.log", max_mb=1, backups=2)
    handler.setFormatter(logging.Formatter("%(message)s"))
    handler.emit(logging.makeLogRecord({"msg": "first", "levelno": logging.INFO}))
    handler.doRollover()
    handler.close()
    with gzip.open(tmp_path / "x.log.1.gz", "rt") as fh:
        assert fh.read() == "first\n"
