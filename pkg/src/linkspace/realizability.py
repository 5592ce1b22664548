"""
Realizability of weighted graphs in the plane.

Closed-form predicates cover cycles (polygon inequality) and K4 (triangle
inequalities plus a vanishing Cayley-Menger determinant). For general graphs
`attempt_realize` runs multi-start nonlinear least squares on the residuals
|p_u - p_v|^2 - l^2; a failure to realize is numerical evidence, not proof.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Literal, TypeAlias

import numpy as np
from scipy.optimize import least_squares

from .graph_core import (
    Cycle,
    Edge,
    PinnedFrame,
    Realization,
    WeightedGraph,
    describe_violations,
    enumerate_simple_cycles,
    feasibility_tolerance,
    validate,
)
from .intervals_arcs import IntervalSet
from .utils.errors import GraphError, RealizationError

logger = logging.getLogger("linkspace")

Verdict: TypeAlias = Literal["realized", "no-realization-found"]

MAX_ITERATIONS = 500
CM_RTOL = 1e-9


def _polygon_tol(total: float) -> float:
    return 1e-12 * (1.0 + total)


def cycle_realizable(lengths: Sequence[float]) -> bool:
    """True iff the largest length is at most the sum of the others.

    A 2-cycle (parallel pair) is realizable iff its lengths are equal.
    Equality is realizable by a degenerate collinear polygon.

    Raises:
        ValueError: fewer than 2 lengths.
    """
    if len(lengths) < 2:
        raise ValueError("A cycle needs at least 2 lengths")
    total = math.fsum(lengths)
    longest = max(lengths)
    return longest <= total - longest + _polygon_tol(total)


def cycle_closure_interval(path_lengths: Sequence[float]) -> IntervalSet:
    """Values of a closing edge that make a path into a realizable cycle.

    Returns [max(0, 2·max − sum), sum].
    """
    if not path_lengths:
        raise ValueError("A path needs at least one length")
    total = math.fsum(path_lengths)
    lo = max(0.0, 2.0 * max(path_lengths) - total)
    return IntervalSet.of((lo, total))


@dataclass(frozen=True)
class K4Lengths:
    """K4 lengths: a=v1v2, b=v2v4, c=v3v4, d=v1v3, alpha=v2v3, beta=v1v4."""

    a: float
    b: float
    c: float
    d: float
    alpha: float
    beta: float

    def __post_init__(self) -> None:
        for name in ("a", "b", "c", "d", "alpha", "beta"):
            if getattr(self, name) < 0:
                raise ValueError(f"K4 length {name} must be nonnegative")

    @classmethod
    def from_points(cls, p1, p2, p3, p4) -> K4Lengths:
        return cls(
            a=math.dist(p1, p2),
            b=math.dist(p2, p4),
            c=math.dist(p3, p4),
            d=math.dist(p1, p3),
            alpha=math.dist(p2, p3),
            beta=math.dist(p1, p4),
        )

    @classmethod
    def from_sequence(cls, values: Sequence[float]) -> K4Lengths:
        if len(values) != 6:
            raise ValueError("K4 needs 6 lengths: a,b,c,d,alpha,beta")
        return cls(*(float(x) for x in values))

    @property
    def max_length(self) -> float:
        return max(self.a, self.b, self.c, self.d, self.alpha, self.beta)

    def triangles(self) -> list[tuple[float, float, float]]:
        """The four triangles v1v2v4, v2v3v4, v1v3v4, v1v2v3."""
        return [
            (self.a, self.b, self.beta),
            (self.b, self.c, self.alpha),
            (self.c, self.d, self.beta),
            (self.d, self.a, self.alpha),
        ]

    def graph(self) -> WeightedGraph:
        return WeightedGraph.from_edges(
            [
                ("v1", "v2", self.a),
                ("v2", "v4", self.b),
                ("v3", "v4", self.c),
                ("v1", "v3", self.d),
                ("v2", "v3", self.alpha),
                ("v1", "v4", self.beta),
            ],
            vertices=("v1", "v2", "v3", "v4"),
        )


def cayley_menger_det(k: K4Lengths) -> float:
    """Determinant of the bordered 5x5 matrix of squared distances of v1..v4."""

    a2, b2, c2, d2 = k.a**2, k.b**2, k.c**2, k.d**2
    al2, be2 = k.alpha**2, k.beta**2
    matrix = np.array(
        [
            [0.0, 1.0, 1.0, 1.0, 1.0],
            [1.0, 0.0, a2, d2, be2],
            [1.0, a2, 0.0, al2, b2],
            [1.0, d2, al2, 0.0, c2],
            [1.0, be2, b2, c2, 0.0],
        ]
    )
    return float(np.linalg.det(matrix))


def k4_realizable(k: K4Lengths) -> bool:
    """Triangle inequalities on all four faces and |CM det| ≤ 1e-9·(1+max)^4."""

    if not all(cycle_realizable(t) for t in k.triangles()):
        return False
    tol = CM_RTOL * (1.0 + k.max_length) ** 4
    return abs(cayley_menger_det(k)) <= tol


def cycle_survey(g: WeightedGraph) -> list[tuple[Cycle, bool]]:
    """Every simple cycle of g with its polygon-inequality verdict."""

    return [(c, cycle_realizable(c.lengths)) for c in enumerate_simple_cycles(g)]


class StressProblem:
    """Least-squares residuals r_e = |p_u - p_v|^2 - l_e^2 over flat coordinates."""

    def __init__(self, g: WeightedGraph) -> None:
        self.graph = g
        self.size = len(g.vertices)
        self.us, self.vs = g.edge_index_arrays()
        self.lengths = g.lengths
        self.squared = self.lengths**2
        self.tolerance = feasibility_tolerance(g.max_length)

    def residual(self, x: np.ndarray) -> np.ndarray:
        p = x.reshape(self.size, 2)
        diff = p[self.us] - p[self.vs]
        return np.sum(diff * diff, axis=1) - self.squared

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        p = x.reshape(self.size, 2)
        diff = 2.0 * (p[self.us] - p[self.vs])
        rows = np.arange(len(self.us))
        jac = np.zeros((len(self.us), 2 * self.size))
        jac[rows, 2 * self.us] += diff[:, 0]
        jac[rows, 2 * self.us + 1] += diff[:, 1]
        jac[rows, 2 * self.vs] -= diff[:, 0]
        jac[rows, 2 * self.vs + 1] -= diff[:, 1]
        return jac

    def stress(self, x: np.ndarray) -> float:
        r = self.residual(x)
        return 0.5 * float(r @ r)

    def gradient(self, x: np.ndarray) -> np.ndarray:
        return self.jacobian(x).T @ self.residual(x)

    def edge_residuals(self, x: np.ndarray) -> np.ndarray:
        p = x.reshape(self.size, 2)
        diff = p[self.us] - p[self.vs]
        return np.abs(np.sqrt(np.sum(diff * diff, axis=1)) - self.lengths)

    def max_residual(self, x: np.ndarray) -> float:
        res = self.edge_residuals(x)
        return float(res.max()) if res.size else 0.0

    def descend(self, x0: np.ndarray, max_iterations: int = MAX_ITERATIONS) -> np.ndarray:
        """Local trust-region descent from x0."""
        if len(self.us) == 0:
            return np.array(x0, dtype=float)
        result = least_squares(
            self.residual,
            np.asarray(x0, dtype=float),
            jac=self.jacobian,
            method="trf",
            xtol=1e-15,
            ftol=1e-15,
            gtol=1e-12,
            max_nfev=max_iterations,
        )
        return result.x

    def random_start(self, seed: int, index: int) -> np.ndarray:
        """Uniform points in a disk of radius sum-of-lengths, seeded by (seed, index)."""
        rng = np.random.default_rng([seed, index])
        radius = max(float(self.lengths.sum()), 1.0)
        r = radius * np.sqrt(rng.random(self.size))
        t = 2.0 * np.pi * rng.random(self.size)
        return np.column_stack((r * np.cos(t), r * np.sin(t))).ravel()


def stress(g: WeightedGraph, x: np.ndarray) -> float:
    """½ Σ (|p_u − p_v|² − l²)² at flat coordinates x."""

    return StressProblem(g).stress(np.asarray(x, dtype=float))


def stress_gradient(g: WeightedGraph, x: np.ndarray) -> np.ndarray:
    """Analytic gradient of `stress`."""

    return StressProblem(g).gradient(np.asarray(x, dtype=float))


_DECADES = np.arange(-16, 3)


@dataclass(frozen=True)
class RealizeReport:
    """Outcome of a multi-start realization attempt."""

    best_realization: Realization
    best_residual: float
    restarts_used: int
    verdict: Verdict
    tolerance: float
    edge_residuals: tuple[float, ...] = ()
    restart_residuals: tuple[float, ...] = field(default=(), repr=False)

    @property
    def realized(self) -> bool:
        return self.verdict == "realized"

    def residual_histogram(self) -> dict[str, int]:
        """Count of per-restart best residuals by decade (log10 bins from 1e-16 to 1e2)."""
        if not self.restart_residuals:
            return {}
        logs = np.log10(np.maximum(np.array(self.restart_residuals), 1e-300))
        logs = np.clip(logs, _DECADES[0], _DECADES[-1] - 1e-9)
        counts, _ = np.histogram(logs, bins=_DECADES)
        return {
            f"1e{lo}..1e{lo + 1}": int(c)
            for lo, c in zip(_DECADES[:-1].tolist(), counts.tolist())
            if c
        }

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "best_residual": self.best_residual,
            "tolerance": self.tolerance,
            "restarts_used": self.restarts_used,
            "realization": self.best_realization.to_json(),
            "edge_residuals": list(self.edge_residuals),
            "residual_histogram": self.residual_histogram(),
        }


def attempt_realize(
    g: WeightedGraph,
    restarts: int = 200,
    seed: int = 0,
    *,
    workers: int = 1,
    pin: PinnedFrame | None = None,
    max_iterations: int = MAX_ITERATIONS,
) -> RealizeReport:
    """Search for a realization by local descent from seeded random starts.

    Stops at the first restart (in index order) whose max edge residual is
    within 1e-7·(1 + max length). Restarts may be evaluated on a thread pool;
    results are merged in index order so the report does not depend on
    `workers`.

    Raises:
        GraphError: g violates its invariants.
    """
    problems = validate(g)
    if problems:
        raise GraphError(describe_violations(problems))
    if restarts < 1:
        raise ValueError("restarts must be at least 1")

    problem = StressProblem(g)

    def run(index: int) -> tuple[float, np.ndarray]:
        x = problem.descend(problem.random_start(seed, index), max_iterations)
        return problem.max_residual(x), x

    residuals: list[float] = []
    best: tuple[float, int, np.ndarray] | None = None
    batch = max(1, workers)
    with ThreadPoolExecutor(max_workers=batch) as pool:
        for first in range(0, restarts, batch):
            indices = range(first, min(first + batch, restarts))
            results = list(pool.map(run, indices)) if batch > 1 else [run(i) for i in indices]
            done = False
            for index, (res, x) in zip(indices, results):
                residuals.append(res)
                if best is None or res < best[0]:
                    best = (res, index, x)
                if res <= problem.tolerance:
                    done = True
                    break
            if done:
                break

    assert best is not None
    best_res, best_index, best_x = best
    realization = Realization.from_array(g.vertices, best_x)
    frame = pin or _default_frame(g)
    if frame is not None:
        realization = realization.pinned(frame)
    verdict: Verdict = "realized" if best_res <= problem.tolerance else "no-realization-found"
    logger.info(
        "attempt_realize: %s after %d restarts (best residual %.3e, restart %d)",
        verdict,
        len(residuals),
        best_res,
        best_index,
    )
    return RealizeReport(
        best_realization=realization,
        best_residual=best_res,
        restarts_used=len(residuals),
        verdict=verdict,
        tolerance=problem.tolerance,
        edge_residuals=tuple(realization.residuals(g).tolist()),
        restart_residuals=tuple(residuals),
    )


def _default_frame(g: WeightedGraph) -> PinnedFrame | None:
    for e in g.edges:
        if e.length > 0:
            return PinnedFrame(e.u, e.v)
    return None


def extend_to_realizable(
    g: WeightedGraph,
    h: WeightedGraph,
    realization: Realization | None = None,
    *,
    restarts: int = 200,
    seed: int = 0,
) -> WeightedGraph:
    """Assign lengths to the edges of g outside h so that g becomes realizable.

    Edges of h are matched to edges of g by endpoints. The realization of h
    (found with `attempt_realize` when not given) is extended over a
    breadth-first spanning forest of g: each unplaced vertex goes directly
    above its parent, one unit higher than every point placed so far. Edges
    outside h take the measured distances.

    Raises:
        GraphError: h has an edge that g lacks.
        RealizationError: the realization of h is missing or violates h.
    """
    matched = _match_edges(g, h)

    if realization is None:
        report = attempt_realize(h, restarts=restarts, seed=seed)
        if not report.realized:
            raise RealizationError(
                f"Subgraph is not realizable (best residual {report.best_residual:.3e})"
            )
        incident = {v for e in h.edges for v in (e.u, e.v)}
        placed = {
            v: p for v, p in report.best_realization.positions.items() if v in incident
        }
    else:
        placed = {v: p for v, p in realization.positions.items() if v in g.index_of}
        for e in h.edges:
            if e.u not in placed or e.v not in placed:
                raise RealizationError(f"Realization has no position for edge {e.u}{e.v}")
        sub = Realization(placed)
        for e in h.edges:
            gap = abs(math.dist(sub.positions[e.u], sub.positions[e.v]) - e.length)
            if gap > feasibility_tolerance(h.max_length):
                raise RealizationError(
                    f"Realization violates edge {e.u}{e.v} by {gap:.3e}"
                )

    positions = _place_spanning_forest(g, dict(placed))
    edges = []
    for i, e in enumerate(g.edges):
        if i in matched:
            edges.append(Edge(e.u, e.v, matched[i]))
        else:
            edges.append(Edge(e.u, e.v, math.dist(positions[e.u], positions[e.v])))
    return WeightedGraph(g.vertices, tuple(edges))


def _match_edges(g: WeightedGraph, h: WeightedGraph) -> dict[int, float]:
    # g edge index -> h length, pairing parallel edges in order.
    used: set[int] = set()
    matched: dict[int, float] = {}
    for e in h.edges:
        for i in g.edge_indices_between(e.u, e.v):
            if i not in used:
                used.add(i)
                matched[i] = e.length
                break
        else:
            raise GraphError(f"Subgraph edge {e.u}{e.v} is not an edge of the graph")
    return matched


def _place_spanning_forest(
    g: WeightedGraph, placed: dict[str, tuple[float, float]]
) -> dict[str, tuple[float, float]]:
    multigraph = g.to_networkx()
    top = max((p[1] for p in placed.values()), default=-1.0)

    def sweep(queue: deque[str]) -> None:
        nonlocal top
        while queue:
            v = queue.popleft()
            for nbr in multigraph.adj[v]:
                if nbr in placed:
                    continue
                top += 1.0
                placed[nbr] = (placed[v][0], top)
                queue.append(nbr)

    sweep(deque(v for v in g.vertices if v in placed))
    for v in g.vertices:
        if v not in placed:
            top += 1.0
            placed[v] = (0.0, top)
            sweep(deque([v]))
    return placed


__all__ = [
    "K4Lengths",
    "RealizeReport",
    "StressProblem",
    "Verdict",
    "attempt_realize",
    "cayley_menger_det",
    "cycle_closure_interval",
    "cycle_realizable",
    "cycle_survey",
    "extend_to_realizable",
    "k4_realizable",
    "stress",
    "stress_gradient",
]
