"""
Weighted-graph data model for planar distance geometry.

A weighted graph is an ordered vertex set plus an ordered list of edges with
nonnegative lengths; parallel edges are distinct records. A realization maps
every vertex to a point of the plane, and a pinned frame fixes one edge on the
positive x-axis to remove the orientation-preserving isometries.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Literal, TypeAlias

import msgspec
import networkx as nx
import numpy as np

from .schemas import EdgeRecord, GraphFile, decode_graph_file, encode_pretty
from .utils.errors import GraphError, GraphFormatError, GraphTooLargeError, RealizationError

logger = logging.getLogger("linkspace")

Point: TypeAlias = tuple[float, float]
ViolationKind: TypeAlias = Literal[
    "loop",
    "missing vertex",
    "negative length",
    "non-finite length",
    "duplicate vertex",
]

MAX_CYCLE_VERTICES = 16
FEASIBILITY_RTOL = 1e-7


def feasibility_tolerance(max_length: float) -> float:
    """Max edge residual accepted as a realization: 1e-7 * (1 + max length)."""

    return FEASIBILITY_RTOL * (1.0 + max_length)


@dataclass(frozen=True)
class Edge:
    """An undirected edge with a prescribed length."""

    u: str
    v: str
    length: float

    def joins(self, x: str, y: str) -> bool:
        return {self.u, self.v} == {x, y} and self.u != self.v


@dataclass(frozen=True)
class Violation:
    """One broken graph invariant, reported as data."""

    kind: ViolationKind
    message: str
    edge_index: int | None = None


@dataclass(frozen=True)
class WeightedGraph:
    """Vertices, edges (multi-edges allowed) and nonnegative lengths."""

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(
            self,
            "edges",
            tuple(e if isinstance(e, Edge) else Edge(*e) for e in self.edges),
        )

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[tuple[str, str, float] | Edge],
        vertices: Iterable[str] | None = None,
    ) -> WeightedGraph:
        """Build a graph; without `vertices`, endpoints are taken in order of appearance."""
        edge_list = [e if isinstance(e, Edge) else Edge(e[0], e[1], float(e[2])) for e in edges]
        if vertices is None:
            seen: dict[str, None] = {}
            for e in edge_list:
                seen.setdefault(e.u)
                seen.setdefault(e.v)
            vertices = seen
        return cls(tuple(vertices), tuple(edge_list))

    @cached_property
    def index_of(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @property
    def lengths(self) -> np.ndarray:
        return np.array([e.length for e in self.edges], dtype=float)

    @property
    def max_length(self) -> float:
        return max((e.length for e in self.edges), default=0.0)

    @property
    def total_length(self) -> float:
        return math.fsum(e.length for e in self.edges)

    def edge_index_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Vertex indices of every edge's endpoints, as two int arrays."""
        us = np.array([self.index_of[e.u] for e in self.edges], dtype=np.intp)
        vs = np.array([self.index_of[e.v] for e in self.edges], dtype=np.intp)
        return us, vs

    def edge_indices_between(self, u: str, v: str) -> list[int]:
        return [i for i, e in enumerate(self.edges) if e.joins(u, v)]

    def with_lengths(self, lengths: Sequence[float]) -> WeightedGraph:
        if len(lengths) != len(self.edges):
            raise GraphError(
                f"Expected {len(self.edges)} lengths, got {len(lengths)}"
            )
        return WeightedGraph(
            self.vertices,
            tuple(Edge(e.u, e.v, float(x)) for e, x in zip(self.edges, lengths)),
        )

    def without_edges(self, pairs: Iterable[tuple[str, str]]) -> WeightedGraph:
        """Drop every edge joining one of the given vertex pairs."""
        drop: set[int] = set()
        for u, v in pairs:
            found = self.edge_indices_between(u, v)
            if not found:
                raise GraphError(f"No edge between {u} and {v}")
            drop.update(found)
        keep = [i for i in range(len(self.edges)) if i not in drop]
        return induced_sublengths(self, keep)

    def to_networkx(self) -> nx.MultiGraph:
        """MultiGraph keyed by edge index, with `length` attributes."""
        graph = nx.MultiGraph()
        graph.add_nodes_from(self.vertices)
        for i, e in enumerate(self.edges):
            graph.add_edge(e.u, e.v, key=i, length=e.length)
        return graph


@dataclass(frozen=True)
class Realization:
    """A map from vertices to points of the plane."""

    positions: Mapping[str, Point] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "positions",
            {v: (float(p[0]), float(p[1])) for v, p in self.positions.items()},
        )

    @classmethod
    def from_array(cls, vertices: Sequence[str], coords: np.ndarray) -> Realization:
        pts = np.asarray(coords, dtype=float).reshape(len(vertices), 2)
        return cls({v: (float(x), float(y)) for v, (x, y) in zip(vertices, pts)})

    def as_array(self, vertices: Sequence[str]) -> np.ndarray:
        try:
            return np.array([self.positions[v] for v in vertices], dtype=float)
        except KeyError as exc:
            raise RealizationError(f"Realization has no position for {exc.args[0]}") from exc

    def covers(self, g: WeightedGraph) -> bool:
        return set(self.positions) == set(g.vertices)

    def residuals(self, g: WeightedGraph) -> np.ndarray:
        """|d(p(u), p(v)) - l(uv)| for every edge, in edge order."""
        pts = self.as_array(g.vertices)
        us, vs = g.edge_index_arrays()
        diff = pts[us] - pts[vs]
        dist = np.sqrt(np.sum(diff * diff, axis=1))
        return np.abs(dist - g.lengths)

    def max_residual(self, g: WeightedGraph) -> float:
        res = self.residuals(g)
        return float(res.max()) if res.size else 0.0

    def reflected(self) -> Realization:
        """Image under the x-axis reflection."""
        return Realization({v: (x, -y) for v, (x, y) in self.positions.items()})

    def pinned(self, frame: PinnedFrame) -> Realization:
        """Rotate and translate so the frame's origin is (0,0) and its axis vertex lies on +x."""
        ox, oy = self.positions[frame.origin]
        bx, by = self.positions[frame.axis]
        angle = math.atan2(by - oy, bx - ox) if (bx, by) != (ox, oy) else 0.0
        c, s = math.cos(-angle), math.sin(-angle)
        moved = {}
        for v, (x, y) in self.positions.items():
            dx, dy = x - ox, y - oy
            moved[v] = (c * dx - s * dy, s * dx + c * dy)
        # Exact zeros on the pinned coordinates.
        moved[frame.origin] = (0.0, 0.0)
        moved[frame.axis] = (moved[frame.axis][0], 0.0)
        return Realization(moved)

    def to_json(self) -> dict[str, list[float]]:
        return {v: [x, y] for v, (x, y) in sorted(self.positions.items())}


@dataclass(frozen=True)
class PinnedFrame:
    """Origin vertex a and axis vertex b of a pinned realization."""

    origin: str
    axis: str

    @classmethod
    def parse(cls, text: str) -> PinnedFrame:
        """Parse "a,b" into a frame."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 2 or not all(parts) or parts[0] == parts[1]:
            raise GraphError(f"Pin must name two distinct vertices as 'a,b', got {text!r}")
        return cls(parts[0], parts[1])

    def check(self, g: WeightedGraph) -> float:
        """Return l(ab), requiring an edge ab of positive length."""
        for i in g.edge_indices_between(self.origin, self.axis):
            if g.edges[i].length > 0:
                return g.edges[i].length
        raise GraphError(
            f"Pin ({self.origin}, {self.axis}) needs an edge of positive length"
        )


@dataclass(frozen=True)
class Cycle:
    """A simple cycle: vertex sequence, the edge joining each consecutive pair, lengths."""

    vertices: tuple[str, ...]
    edge_indices: tuple[int, ...]
    lengths: tuple[float, ...]


def validate(g: WeightedGraph) -> list[Violation]:
    """Return every invariant violation of `g`; an empty list means ok."""

    violations: list[Violation] = []
    seen: set[str] = set()
    for v in g.vertices:
        if v in seen:
            violations.append(Violation("duplicate vertex", f"vertex {v!r} declared twice"))
        seen.add(v)
    for i, e in enumerate(g.edges):
        if e.u == e.v:
            violations.append(Violation("loop", f"edge {i} is a loop at {e.u!r}", i))
        for end in (e.u, e.v):
            if end not in seen:
                violations.append(
                    Violation("missing vertex", f"edge {i} names undeclared vertex {end!r}", i)
                )
        if not math.isfinite(e.length):
            violations.append(Violation("non-finite length", f"edge {i} has length {e.length}", i))
        elif e.length < 0:
            violations.append(Violation("negative length", f"edge {i} has length {e.length}", i))
    return violations


def describe_violations(violations: Sequence[Violation]) -> str:
    """Each violation as "kind: message", joined by semicolons."""

    return "; ".join(f"{p.kind}: {p.message}" for p in violations)


def enumerate_simple_cycles(g: WeightedGraph) -> list[Cycle]:
    """List every simple cycle once, up to rotation and reversal.

    A parallel pair is a 2-cycle; a longer vertex cycle through parallel
    edges yields one cycle per choice of edges. Cycles are rotated to start
    at their smallest vertex, oriented so the second vertex is smaller than
    the last, and sorted by size, then vertices, then edge indices.

    Raises:
        GraphError: duplicate vertices or edges naming undeclared vertices.
        GraphTooLargeError: more than 16 vertices.
    """
    structural = [p for p in validate(g) if p.kind in ("duplicate vertex", "missing vertex")]
    if structural:
        raise GraphError(describe_violations(structural))
    if len(g.vertices) > MAX_CYCLE_VERTICES:
        raise GraphTooLargeError(
            f"Cycle enumeration supports at most {MAX_CYCLE_VERTICES} vertices, "
            f"got {len(g.vertices)}"
        )

    multigraph = g.to_networkx()
    order = sorted(g.vertices)
    rank = {v: i for i, v in enumerate(order)}
    adjacency = {
        v: sorted((n for n in multigraph.adj[v] if n != v), key=rank.__getitem__)
        for v in order
    }

    def parallel(u: str, v: str) -> list[int]:
        return sorted(multigraph[u][v])

    cycles: list[Cycle] = []
    for u in order:
        for v in adjacency[u]:
            if rank[v] <= rank[u]:
                continue
            for i, j in itertools.combinations(parallel(u, v), 2):
                cycles.append(Cycle((u, v), (i, j), (g.edges[i].length, g.edges[j].length)))

    vertex_cycles: list[tuple[str, ...]] = []
    for start in order:
        path = [start]
        on_path = {start}

        def extend(last: str, start: str = start) -> None:
            for nbr in adjacency[last]:
                if nbr == start:
                    if len(path) >= 3 and rank[path[1]] < rank[path[-1]]:
                        vertex_cycles.append(tuple(path))
                elif rank[nbr] > rank[start] and nbr not in on_path:
                    path.append(nbr)
                    on_path.add(nbr)
                    extend(nbr)
                    path.pop()
                    on_path.discard(nbr)

        extend(start)

    for verts in vertex_cycles:
        hops = [parallel(a, b) for a, b in zip(verts, verts[1:] + verts[:1])]
        for choice in itertools.product(*hops):
            cycles.append(Cycle(verts, choice, tuple(g.edges[i].length for i in choice)))

    cycles.sort(key=lambda c: (len(c.vertices), [rank[v] for v in c.vertices], c.edge_indices))
    logger.debug("Enumerated %d simple cycles on %d vertices", len(cycles), len(g.vertices))
    return cycles


def induced_sublengths(g: WeightedGraph, edge_subset: Iterable[int]) -> WeightedGraph:
    """Subgraph on the same vertex set keeping only the chosen edges (in g's order)."""

    chosen = set()
    for i in edge_subset:
        if isinstance(i, bool) or not isinstance(i, (int, np.integer)) or not 0 <= i < len(g.edges):
            raise GraphError(f"Unknown edge reference: {i!r}")
        chosen.add(int(i))
    return WeightedGraph(g.vertices, tuple(g.edges[i] for i in sorted(chosen)))


def loads_graph(raw: bytes | str) -> WeightedGraph:
    """Parse and validate a JSON graph document.

    Raises:
        GraphFormatError: schema violations, unknown keys or broken invariants.
    """
    try:
        doc = decode_graph_file(raw)
    except (msgspec.ValidationError, msgspec.DecodeError) as exc:
        raise GraphFormatError(f"Invalid graph file: {exc}") from exc
    g = WeightedGraph(
        tuple(doc.vertices),
        tuple(Edge(e.u, e.v, e.length) for e in doc.edges),
    )
    problems = validate(g)
    if problems:
        raise GraphFormatError(describe_violations(problems))
    return g


def load_graph(path: Path) -> WeightedGraph:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise GraphFormatError(f"Unable to read graph file: {path}") from exc
    return loads_graph(raw)


def dumps_graph(g: WeightedGraph) -> bytes:
    """Canonical JSON: vertices sorted, edge order preserved."""

    doc = GraphFile(
        vertices=sorted(g.vertices),
        edges=[EdgeRecord(e.u, e.v, float(e.length)) for e in g.edges],
    )
    return encode_pretty(doc)


def save_graph(g: WeightedGraph, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(dumps_graph(g))
    return path


__all__ = [
    "FEASIBILITY_RTOL",
    "MAX_CYCLE_VERTICES",
    "Cycle",
    "Edge",
    "PinnedFrame",
    "Point",
    "Realization",
    "Violation",
    "ViolationKind",
    "WeightedGraph",
    "describe_violations",
    "dumps_graph",
    "enumerate_simple_cycles",
    "feasibility_tolerance",
    "induced_sublengths",
    "load_graph",
    "loads_graph",
    "save_graph",
    "validate",
]
