"""
Environment variable helpers.

Small helpers for reading `LINKSPACE_*` env vars with graceful fallback when
a value is missing or malformed.
"""

from __future__ import annotations

from collections.abc import Mapping
import os


def get_env(
    name: str,
    *,
    env: Mapping[str, str] | None = None,
) -> str | None:
    """
    Return an env var value, treating empty strings as unset.

    Args:
        name: The env var name.
        env: Optional mapping to read from (defaults to os.environ).

    Returns:
        The value, or None if the variable is unset or empty.
    """
    environ = os.environ if env is None else env
    value = environ.get(name)
    if value:
        return value
    return None


def get_int_env(
    name: str,
    *,
    default: int,
    min_value: int | None = None,
    env: Mapping[str, str] | None = None,
) -> int:
    """
    Return an integer env var.

    Invalid (non-integer or below `min_value`) values are ignored and
    `default` is returned.
    """
    raw = get_env(name, env=env)
    if raw is None:
        return default
    try:
        parsed = int(raw.strip())
    except ValueError:
        return default
    if min_value is not None and parsed < min_value:
        return default
    return parsed


__all__ = ["get_env", "get_int_env"]
