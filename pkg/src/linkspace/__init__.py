"""
linkspace

Planar distance geometry for weighted graphs: polygon and Cayley-Menger
realizability tests, staged realizable extension of K33, and counting the
connected components of pinned realization spaces.
"""

__version__ = "0.1.0"

from .graph_core import Edge, Realization, WeightedGraph
from .intervals_arcs import CircleArcSet, IntervalSet


def main():
    """Entry point for the CLI command."""
    from .cli import main as cli_main

    raise SystemExit(cli_main())


__all__ = [
    "CircleArcSet",
    "Edge",
    "IntervalSet",
    "Realization",
    "WeightedGraph",
    "main",
]
