"""Shared filesystem paths for linkspace."""

from __future__ import annotations

import os
from pathlib import Path

DATA_DIRNAME = ".linkspace"
HOME_ENV_VAR = "LINKSPACE_HOME"


def resolve_data_dir(*, home: Path | None = None) -> Path:
    """Return the data dir path to use.

    `$LINKSPACE_HOME` wins when set; otherwise `~/.linkspace/` under `home`
    (default: the user's home directory). The directory is not created.
    """

    override = os.environ.get(HOME_ENV_VAR)
    if override:
        return Path(override).expanduser()

    home_dir = home or Path.home()
    return home_dir / DATA_DIRNAME


__all__ = [
    "DATA_DIRNAME",
    "HOME_ENV_VAR",
    "resolve_data_dir",
]
