"""
Exception hierarchy and error response helpers for linkspace.

Library code raises the exceptions below; the CLI turns them into a
standardized stderr message with an optional recovery hint.
"""

from __future__ import annotations


class LinkspaceError(Exception):
    """Base class for every linkspace failure."""


class GraphError(LinkspaceError, ValueError):
    """Raised when a weighted graph (or a reference into one) is invalid."""


class GraphFormatError(GraphError):
    """Raised when a graph or lengths file cannot be parsed."""


class GraphTooLargeError(GraphError):
    """Raised when an exhaustive enumeration would exceed its size limit."""


class ArcSetError(LinkspaceError, ValueError):
    """Raised when an arc-set operation receives an empty set."""


class RealizationError(LinkspaceError, ValueError):
    """Raised when a supplied realization does not fit its graph."""


class StageError(LinkspaceError, ValueError):
    """Raised when a K33 extension stage cannot be evaluated."""


class StageChoiceError(StageError):
    """Raised when a chosen length lies outside its stage's feasible set."""


class WorkspaceEmptyError(StageError):
    """Raised when a G2 workspace is empty."""


def error_response(
    message: str,
    hint: str | None = None,
    **extra_fields,
) -> dict:
    """
    Create a standardized error response with optional recovery hint.

    Args:
        message: The error message describing what went wrong
        hint: Actionable instructions for recovery (optional)
        **extra_fields: Additional fields to include in the response

    Returns:
        Dict with 'error', optional 'hint', and any extra fields
    """
    result = {"error": message}
    if hint:
        result["hint"] = hint
    result.update(extra_fields)
    return result


# Common hints for reusable error scenarios
HINTS = {
    "graph_format": (
        'Graph files look like {"vertices": ["v1", ...], "edges": '
        '[{"u": "v1", "v": "v2", "length": 1.0}, ...]}; unknown keys are rejected'
    ),
    "lengths_format": (
        "Pass --lengths as comma-separated numbers (K33 order: "
        "a,b,c,d,e,f,alpha,beta[,gamma]) or as a path to a JSON lengths file"
    ),
    "graph_too_large": (
        "Cycle enumeration is exhaustive and limited to 16 vertices; "
        "split the graph or check cycles on a subgraph"
    ),
    "stage_choice": (
        "Choose each length inside the feasible set reported for its stage; "
        "run k33-stage on the earlier stage to see the set"
    ),
    "workspace_empty": (
        "The chosen alpha leaves no room for v3 or v6; pick alpha inside the "
        "alpha-interval"
    ),
    "pin": (
        "Pin with two adjacent vertices joined by an edge of positive length, "
        "e.g. --pin v4,v1"
    ),
    "config": "Run 'linkspace config show' to inspect the effective configuration",
}


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
]
