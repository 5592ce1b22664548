"""Named example graphs and K33 length sets used by the CLI, fixtures and tests."""

from __future__ import annotations

import math

from .graph_core import WeightedGraph
from .k33_extension import K33Lengths
from .realizability import K4Lengths

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)
SQRT5 = math.sqrt(5.0)
SQRT13 = math.sqrt(13.0)

# a = ε in the one-parameter examples.
EPSILON = 0.05

# Edge set shared by the seven-vertex examples: K4 on v1..v4 with v1v2, v1v3
# and v2v3 subdivided by v5, v6 and v7.
_SUBDIVIDED_K4 = (
    ("v1", "v4"),
    ("v1", "v5"),
    ("v1", "v6"),
    ("v2", "v4"),
    ("v2", "v5"),
    ("v2", "v7"),
    ("v3", "v4"),
    ("v3", "v6"),
    ("v3", "v7"),
)
_SEVEN = tuple(f"v{i}" for i in range(1, 8))


def k33_graph(lengths: K33Lengths) -> WeightedGraph:
    return lengths.graph()


def k4_graph(k: K4Lengths) -> WeightedGraph:
    return k.graph()


def four_ex_graph(*, printed: bool = False) -> WeightedGraph:
    """Seven vertices, nine edges, every cycle realizable.

    With `printed=False` (v2v7 = 1/4, v3v7 = 5) no realization exists: the
    v7 path forces d(v2, v3) into [4.75, 5.25] while the rest of the graph only
    reaches [0, 4] ∪ [6, 2√13]. The historical lengths (v2v7 = 1/2,
    v3v7 = 7/2) are realizable.
    """
    v2v7, v3v7 = (0.5, 3.5) if printed else (0.25, 5.0)
    lengths = {
        ("v1", "v4"): 2.0,
        ("v1", "v5"): 4.0,
        ("v1", "v6"): 4.0,
        ("v2", "v4"): SQRT13,
        ("v2", "v5"): 1.0,
        ("v2", "v7"): v2v7,
        ("v3", "v4"): SQRT13,
        ("v3", "v6"): 1.0,
        ("v3", "v7"): v3v7,
    }
    return WeightedGraph.from_edges(
        [(u, v, lengths[u, v]) for u, v in _SUBDIVIDED_K4], vertices=_SEVEN
    )


def three_connex_h() -> WeightedGraph:
    """Spokes v1v4 = v2v4 = v3v4 = √3, all rim edges 3/2; three components pinned at (v4, v1)."""

    return WeightedGraph.from_edges(
        [(u, v, SQRT3 if v == "v4" else 1.5) for u, v in _SUBDIVIDED_K4],
        vertices=_SEVEN,
    )


def three_connex_g() -> WeightedGraph:
    """H plus v8 joined to v2 and v3 by √2; connected moduli space."""

    h = three_connex_h()
    return WeightedGraph.from_edges(
        list(h.edges) + [("v2", "v8", SQRT2), ("v3", "v8", SQRT2)],
        vertices=h.vertices + ("v8",),
    )


def k33_example(number: int, *, printed: bool = False) -> K33Lengths:
    """Lengths through beta of the five one-parameter K33 examples.

    Examples 3 and 4 default to their self-consistent lengths; `printed=True`
    returns the historical values (Example 3: four unrelated γ-values;
    Example 4: β outside its β-set).
    """
    match number:
        case 1:
            return K33Lengths(a=1, b=1, c=1, d=1, e=1, f=1, alpha=1, beta=1)
        case 2:
            return K33Lengths(a=EPSILON, b=1, c=1, d=1, e=1, f=SQRT2, alpha=1, beta=SQRT2)
        case 3 if printed:
            return K33Lengths(
                a=EPSILON, b=SQRT5 / 2, c=SQRT5 / 2, d=1, e=SQRT5 / 4, f=SQRT5 / 4,
                alpha=1, beta=SQRT2,
            )
        case 3:
            return K33Lengths(
                a=EPSILON, b=math.sqrt(10.0) / 2, c=math.sqrt(10.0) / 2, d=1,
                e=SQRT5 / 2, f=SQRT5 / 2, alpha=1, beta=SQRT2,
            )
        case 4:
            return K33Lengths(
                a=EPSILON, b=math.sqrt(17.0), c=math.sqrt(29.0), d=SQRT5,
                e=SQRT13, f=math.sqrt(10.0), alpha=3,
                beta=5 * SQRT2 if printed else 2 * SQRT5,
            )
        case 5:
            return K33Lengths(a=EPSILON, b=1, c=SQRT2, d=SQRT2, e=SQRT2, f=1, alpha=1, beta=1)
    raise ValueError(f"Unknown K33 example {number}")


__all__ = [
    "EPSILON",
    "four_ex_graph",
    "k33_example",
    "k33_graph",
    "k4_graph",
    "three_connex_g",
    "three_connex_h",
]
