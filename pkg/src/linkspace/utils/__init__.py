"""
Shared utilities for linkspace.
"""

from .env_vars import get_env, get_int_env
from .errors import (
    HINTS,
    ArcSetError,
    GraphError,
    GraphFormatError,
    GraphTooLargeError,
    LinkspaceError,
    RealizationError,
    StageChoiceError,
    StageError,
    WorkspaceEmptyError,
    error_response,
)

__all__ = [
    "HINTS",
    "ArcSetError",
    "GraphError",
    "GraphFormatError",
    "GraphTooLargeError",
    "LinkspaceError",
    "RealizationError",
    "StageChoiceError",
    "StageError",
    "WorkspaceEmptyError",
    "error_response",
    "get_env",
    "get_int_env",
]
