"""
Staged realizable extension for K33.

Starting from the path G0 = v6 v1 v2 v3 v4 v5 with lengths a..e, edges are
added one at a time: f = v5v6 closes a hexagon, alpha = v1v4 splits it into
two quadrilaterals, beta = v3v6 and finally gamma = v2v5. Each stage returns
the set of values keeping the graph realizable: an interval for f and alpha,
one or two intervals for beta (exact, from workspace arcs), and up to four
intervals for gamma (numerical, from a one-parameter sweep of G3).

Pinned frame throughout: p4 = (0, 0), p1 = (alpha, 0).
"""

from __future__ import annotations

import dataclasses
import logging
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Literal, TypeAlias

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .config import MIN_RESOLUTION
from .graph_core import Realization, WeightedGraph
from .intervals_arcs import (
    CircleArcSet,
    IntervalSet,
    StageBounds,
    arc_distance_set,
    circle_annulus_arcs,
)
from .realizability import cycle_closure_interval
from .schemas import K33LengthsFile
from .utils.errors import GraphError, StageChoiceError, StageError, WorkspaceEmptyError

logger = logging.getLogger("linkspace")

StageName: TypeAlias = Literal["f", "alpha", "beta", "gamma"]
GraphStage: TypeAlias = Literal["G0", "G1", "G2", "G3", "K33"]
Signs: TypeAlias = tuple[int, int, int]

LENGTH_FIELDS = ("a", "b", "c", "d", "e", "f", "alpha", "beta", "gamma")
EDGE_OF_FIELD = {
    "a": ("v1", "v6"),
    "b": ("v1", "v2"),
    "c": ("v2", "v3"),
    "d": ("v3", "v4"),
    "e": ("v4", "v5"),
    "f": ("v5", "v6"),
    "alpha": ("v1", "v4"),
    "beta": ("v3", "v6"),
    "gamma": ("v2", "v5"),
}
K33_VERTICES = ("v1", "v2", "v3", "v4", "v5", "v6")
_GRAPH_STAGES: tuple[GraphStage, ...] = ("G0", "G1", "G2", "G3", "K33")
STAGE_INTERVAL_BOUND: dict[StageName, int] = {"f": 1, "alpha": 1, "beta": 2, "gamma": 4}

# Sign tuples (s5, s3, s2) in lexicographic order with + before -.
# Sheet index t = 4*i5 + 2*i3 + i2 where i = 0 for + and 1 for -.
SIGN_TUPLES: tuple[Signs, ...] = tuple(
    (1 - 2 * i5, 1 - 2 * i3, 1 - 2 * i2) for i5 in (0, 1) for i3 in (0, 1) for i2 in (0, 1)
)
SHEETS = len(SIGN_TUPLES)

BISECTION_TOL = 1e-10
MERGE_GAP_RTOL = 1e-3


def sheet_index(signs: Signs) -> int:
    i5, i3, i2 = ((1 - s) // 2 for s in signs)
    return 4 * i5 + 2 * i3 + i2


def format_signs(signs: Signs) -> str:
    return "".join("+" if s > 0 else "-" for s in signs)


@dataclass(frozen=True)
class K33Lengths:
    """K33 lengths by stage; fields after the current stage are None.

    a = v1v6, b = v1v2, c = v2v3, d = v3v4, e = v4v5, f = v5v6,
    alpha = v1v4, beta = v3v6, gamma = v2v5.
    """

    a: float | None = None
    b: float | None = None
    c: float | None = None
    d: float | None = None
    e: float | None = None
    f: float | None = None
    alpha: float | None = None
    beta: float | None = None
    gamma: float | None = None

    def __post_init__(self) -> None:
        missing = False
        for name in LENGTH_FIELDS:
            value = getattr(self, name)
            if value is None:
                missing = True
                continue
            if missing:
                raise ValueError(f"K33 length {name} given but an earlier stage is missing")
            value = float(value)
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"K33 length {name} must be a finite nonnegative number")
            object.__setattr__(self, name, value)
        if any(getattr(self, name) is None for name in LENGTH_FIELDS[:5]):
            raise ValueError("K33 lengths need at least a, b, c, d, e")

    @classmethod
    def from_sequence(cls, values: Sequence[float]) -> K33Lengths:
        """Lengths in the order a,b,c,d,e,f,alpha,beta[,gamma]."""
        if not 5 <= len(values) <= len(LENGTH_FIELDS):
            raise ValueError(
                "K33 lengths are a,b,c,d,e[,f[,alpha[,beta[,gamma]]]] "
                f"(5 to 9 values), got {len(values)}"
            )
        return cls(**dict(zip(LENGTH_FIELDS, (float(v) for v in values))))

    @classmethod
    def from_file(cls, doc: K33LengthsFile) -> K33Lengths:
        return cls(**{name: getattr(doc, name) for name in LENGTH_FIELDS})

    @classmethod
    def from_graph(cls, g: WeightedGraph) -> K33Lengths:
        """Read lengths off a K33 (or stage subgraph) on vertices v1..v6."""
        if set(g.vertices) != set(K33_VERTICES):
            raise GraphError("A K33 graph must have exactly the vertices v1..v6")
        values: dict[str, float] = {}
        used = 0
        for name, (u, v) in EDGE_OF_FIELD.items():
            found = g.edge_indices_between(u, v)
            if len(found) > 1:
                raise GraphError(f"K33 graph has parallel edges between {u} and {v}")
            if found:
                values[name] = g.edges[found[0]].length
                used += 1
        if used != len(g.edges):
            raise GraphError("Graph has edges that are not K33 edges")
        return cls(**values)

    @property
    def stage(self) -> GraphStage:
        present = sum(getattr(self, name) is not None for name in LENGTH_FIELDS)
        return _GRAPH_STAGES[present - 5]

    def has_stage(self, stage: GraphStage) -> bool:
        return _GRAPH_STAGES.index(self.stage) >= _GRAPH_STAGES.index(stage)

    def require(self, stage: GraphStage) -> None:
        if not self.has_stage(stage):
            needed = LENGTH_FIELDS[: 5 + _GRAPH_STAGES.index(stage)]
            raise StageError(f"Stage {stage} needs lengths {', '.join(needed)}")

    def values(self) -> tuple[float, ...]:
        return tuple(v for v in (getattr(self, n) for n in LENGTH_FIELDS) if v is not None)

    @property
    def scale(self) -> float:
        """Sum of the lengths a..beta that are present."""
        return math.fsum(self.values()[:8])

    def replace(self, **changes: float | None) -> K33Lengths:
        return dataclasses.replace(self, **changes)

    def graph(self) -> WeightedGraph:
        """The stage graph on v1..v6 with the present lengths."""
        edges = [
            (*EDGE_OF_FIELD[name], getattr(self, name))
            for name in LENGTH_FIELDS
            if getattr(self, name) is not None
        ]
        return WeightedGraph.from_edges(edges, vertices=K33_VERTICES)

    def to_json(self) -> dict[str, float]:
        return {n: getattr(self, n) for n in LENGTH_FIELDS if getattr(self, n) is not None}


@dataclass(frozen=True)
class BranchConfig:
    """Sweep angle of p6 around p1 and the branch signs (s5, s3, s2)."""

    theta: float
    signs: Signs


@dataclass(frozen=True)
class RegionSummary:
    """One connected (theta, sheet) region of the G3 sweep."""

    sheets: tuple[str, ...]
    theta_lo: float
    theta_hi: float
    gamma_lo: float
    gamma_hi: float
    cells: int
    continuum: bool = False

    def to_json(self) -> dict:
        return dataclasses.asdict(self) | {"sheets": list(self.sheets)}


@dataclass(frozen=True)
class StageReport:
    """Feasible set of one extension stage."""

    stage: StageName
    feasible_set: IntervalSet
    bounds: StageBounds | None = None
    regions: tuple[RegionSummary, ...] = ()
    bound_exceeded: bool = False

    def to_json(self) -> dict:
        return {
            "stage": self.stage,
            "feasible_set": self.feasible_set.to_json(),
            "interval_count": len(self.feasible_set),
            "bounds": self.bounds.to_json() if self.bounds else None,
            "regions": [r.to_json() for r in self.regions],
            "bound_exceeded": self.bound_exceeded,
        }


def f_interval(a: float, b: float, c: float, d: float, e: float) -> StageReport:
    """Values of f = v5v6 closing the path G0 into a realizable hexagon."""

    return StageReport("f", cycle_closure_interval([a, b, c, d, e]))


def alpha_interval(a: float, b: float, c: float, d: float, e: float, f: float) -> StageReport:
    """Values of alpha = v1v4 realizing both quadrilaterals of G2.

    The chord v1v4 must close both paths v4 v5 v6 v1 (e, f, a) and
    v1 v2 v3 v4 (b, c, d).

    Raises:
        StageChoiceError: f lies outside the f-interval.
    """
    f_set = f_interval(a, b, c, d, e).feasible_set
    tol = _choice_tol(a + b + c + d + e + f)
    if not f_set.contains(f, tol):
        raise StageChoiceError(f"f = {f:.10g} is outside the feasible set {f_set.format()}")
    first = cycle_closure_interval([a, e, f])
    second = cycle_closure_interval([b, c, d])
    feasible = first.intersect(second)
    if feasible.is_empty:
        # Boundary choices of f can lose the touching point to rounding.
        gap = max(first.lo - second.hi, second.lo - first.hi)
        if gap <= tol:
            point = (max(first.lo, second.lo) + min(first.hi, second.hi)) / 2
            feasible = IntervalSet.point(point)
        else:
            raise StageError("alpha-interval is empty although f is feasible")
    bounds = StageBounds(mu1=2.0 * max(a, e, f), mu2=2.0 * max(b, c, d))
    return StageReport("alpha", feasible, bounds)


def workspaces_G2(lengths: K33Lengths) -> tuple[CircleArcSet, CircleArcSet]:
    """Workspaces (W3, W6) of v3 and v6 in the pinned G2.

    W6 lies on the circle of radius a about p1 at distance [|e-f|, e+f] from
    p4; W3 lies on the circle of radius d about p4 at distance [|b-c|, b+c]
    from p1.

    Raises:
        WorkspaceEmptyError: either workspace is empty.
    """
    lengths.require("G2")
    a, b, c, d, e, f, alpha = lengths.values()[:7]
    w6 = circle_annulus_arcs(alpha, a, 0.0, abs(e - f), e + f)
    w3 = circle_annulus_arcs(0.0, d, alpha, abs(b - c), b + c)
    for name, ws in (("W3", w3), ("W6", w6)):
        if ws.empty:
            raise WorkspaceEmptyError(f"Workspace {name} is empty for alpha = {alpha:.10g}")
    return w3, w6


def beta_set(lengths: K33Lengths) -> StageReport:
    """Values of beta = v3v6: the distances between W3 and W6."""

    w3, w6 = workspaces_G2(lengths)
    feasible, bounds = arc_distance_set(w3, w6)
    logger.info("beta-set %s (split=%s)", feasible.format(), bounds.split)
    return StageReport("beta", feasible, bounds)


def _choice_tol(scale: float) -> float:
    return 1e-9 * (1.0 + scale)


def _intersect(
    c1: np.ndarray,
    r1: float,
    c2: np.ndarray,
    r2: float,
    tol_d: float,
    tol_h: float,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    # Circle(c1, r1) ∩ circle(c2, r2) for every row of c2.
    # Returns points [row, sign(+,-), xy] with + on the left of c1 -> c2 (NaN when
    # infeasible), the raw discriminant r1^2 - along^2 (NaN when the centres
    # coincide) and a flag for coincident circles.
    c1 = np.broadcast_to(c1, c2.shape)
    dx = c2[:, 0] - c1[:, 0]
    dy = c2[:, 1] - c1[:, 1]
    dist2 = dx * dx + dy * dy
    dist = np.sqrt(dist2)
    degenerate = dist <= tol_d
    coincident = degenerate & (abs(r1 - r2) <= tol_d)
    safe = np.where(degenerate, 1.0, dist)
    ux, uy = dx / safe, dy / safe
    along = (dist2 + r1 * r1 - r2 * r2) / (2.0 * safe)
    raw = np.where(degenerate, np.nan, r1 * r1 - along * along)
    h = np.sqrt(np.where(raw >= -tol_h, np.maximum(raw, 0.0), np.nan))
    bx = c1[:, 0] + along * ux
    by = c1[:, 1] + along * uy
    pts = np.empty((len(c2), 2, 2))
    pts[:, 0, 0] = bx - h * uy
    pts[:, 0, 1] = by + h * ux
    pts[:, 1, 0] = bx + h * uy
    pts[:, 1, 1] = by - h * ux
    return pts, raw, coincident


def _distance(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    dx = p[..., 0] - q[..., 0]
    dy = p[..., 1] - q[..., 1]
    return np.sqrt(dx * dx + dy * dy)


@dataclass
class _Solution:
    # Positions and discriminants for a batch of sweep angles.
    p6: np.ndarray  # (M, 2)
    p5: np.ndarray  # (M, 2, 2) [row, i5]
    p3: np.ndarray  # (M, 2, 2) [row, i3]
    p2: np.ndarray  # (M, 2, 2, 2) [row, i3, i2]
    disc5: np.ndarray  # (M,)
    disc3: np.ndarray  # (M,)
    disc2: np.ndarray  # (M, 2) [row, i3]
    gamma: np.ndarray  # (M, 8)
    cont_lo: np.ndarray  # (M, 2, 2) [row, i5, i3]
    cont_hi: np.ndarray

    @classmethod
    def concat(cls, parts: list[_Solution]) -> _Solution:
        return cls(
            *(
                np.concatenate([getattr(p, f.name) for p in parts])
                for f in dataclasses.fields(cls)
            )
        )


def _tolerances(lengths: K33Lengths) -> tuple[float, float]:
    scale = 1.0 + lengths.scale
    return 1e-9 * scale, 1e-12 * scale * scale


def _solve_theta(lengths: K33Lengths, cos: np.ndarray, sin: np.ndarray) -> _Solution:
    a, b, c, d, e, f, alpha, beta = lengths.values()[:8]
    tol_d, tol_h = _tolerances(lengths)
    p4 = np.zeros(2)
    p1 = np.array([alpha, 0.0])
    with np.errstate(invalid="ignore", divide="ignore"):
        p6 = np.column_stack((alpha + a * cos, a * sin))
        p5, disc5, _ = _intersect(p4, e, p6, f, tol_d, tol_h)
        p3, disc3, _ = _intersect(p4, d, p6, beta, tol_d, tol_h)
        rows = len(cos)
        p2 = np.empty((rows, 2, 2, 2))
        disc2 = np.empty((rows, 2))
        coincident2 = np.empty((rows, 2), dtype=bool)
        for i3 in (0, 1):
            p2[:, i3], disc2[:, i3], coincident2[:, i3] = _intersect(
                p1, b, p3[:, i3], c, tol_d, tol_h
            )
        gamma = np.empty((rows, SHEETS))
        cont_lo = np.full((rows, 2, 2), np.nan)
        cont_hi = np.full((rows, 2, 2), np.nan)
        for i5 in (0, 1):
            reach = _distance(p5[:, i5], p1)
            for i3 in (0, 1):
                for i2 in (0, 1):
                    gamma[:, 4 * i5 + 2 * i3 + i2] = _distance(p2[:, i3, i2], p5[:, i5])
                # p3 = p1 and b = c: p2 is anywhere on the circle of radius b about p1.
                valid = coincident2[:, i3] & np.isfinite(reach)
                cont_lo[:, i5, i3] = np.where(valid, np.abs(reach - b), np.nan)
                cont_hi[:, i5, i3] = np.where(valid, reach + b, np.nan)
    return _Solution(p6, p5, p3, p2, disc5, disc3, disc2, gamma, cont_lo, cont_hi)


def sheet_gamma(lengths: K33Lengths, theta: float, sheet: int) -> float:
    """γ on one branch sheet at a sweep angle (NaN when infeasible)."""

    sol = _solve_theta(lengths, np.array([math.cos(theta)]), np.array([math.sin(theta)]))
    return float(sol.gamma[0, sheet])


def configuration_at(lengths: K33Lengths, theta: float, signs: Signs) -> Realization | None:
    """Pinned realization of G3 (v1..v6) on a branch, or None when infeasible."""

    lengths.require("G3")
    sol = _solve_theta(lengths, np.array([math.cos(theta)]), np.array([math.sin(theta)]))
    i5, i3, i2 = ((1 - s) // 2 for s in signs)
    points = {
        "v1": (lengths.alpha, 0.0),
        "v2": tuple(sol.p2[0, i3, i2]),
        "v3": tuple(sol.p3[0, i3]),
        "v4": (0.0, 0.0),
        "v5": tuple(sol.p5[0, i5]),
        "v6": tuple(sol.p6[0]),
    }
    if not all(math.isfinite(x) for p in points.values() for x in p):
        return None
    return Realization(points)


def coincident_configuration(
    lengths: K33Lengths, theta: float, signs: tuple[int, int], gamma: float
) -> Realization | None:
    """Realization on a continuum cell (p3 = p1, b = c) with d(p2, p5) as close to gamma as possible.

    `signs` are (s5, s3). Returns None when the cell is not a continuum cell.
    """
    sol = _solve_theta(lengths, np.array([math.cos(theta)]), np.array([math.sin(theta)]))
    i5, i3 = ((1 - s) // 2 for s in signs)
    if not math.isfinite(sol.cont_lo[0, i5, i3]):
        return None
    b, alpha = lengths.b, lengths.alpha
    p1 = np.array([alpha, 0.0])
    p5 = sol.p5[0, i5]
    reach = float(_distance(p5, p1))
    tol_d, tol_h = _tolerances(lengths)
    if reach <= tol_d:
        p2 = p1 + np.array([b, 0.0])
    else:
        pts, _, _ = _intersect(p1, b, p5[None, :], gamma, tol_d, tol_h)
        if np.isfinite(pts[0, 0, 0]):
            p2 = pts[0, 0]
        else:
            # Nearest or farthest point of the circle, whichever is closer to gamma.
            toward = (p5 - p1) / reach
            near, far = p1 + b * toward, p1 - b * toward
            p2 = near if abs(abs(reach - b) - gamma) <= abs(reach + b - gamma) else far
    return Realization(
        {
            "v1": (alpha, 0.0),
            "v2": tuple(p2),
            "v3": tuple(sol.p3[0, i3]),
            "v4": (0.0, 0.0),
            "v5": tuple(p5),
            "v6": tuple(sol.p6[0]),
        }
    )


def _glue_mask(raw: np.ndarray, tol_h: float) -> np.ndarray:
    # Cells where the two branches of a circle intersection meet: tangent at
    # the cell, or the discriminant changes sign towards a neighbour.
    finite = np.isfinite(raw)
    feasible = finite & (raw >= -tol_h)
    tangent = finite & (np.abs(raw) <= tol_h)
    glue = tangent.copy()
    for shift in (1, -1):
        nbr_finite = np.roll(finite, -shift, axis=0)
        nbr_feasible = np.roll(feasible, -shift, axis=0)
        glue |= feasible & nbr_finite & ~nbr_feasible
    return glue


@dataclass
class SweepGrid:
    """The G3 sweep on a uniform theta grid over [-pi, pi).

    Nodes are regular cells (k, t) for sheet t at grid index k, numbered
    8k + t, and continuum cells (k, i5, i3) where p2 ranges over a whole
    circle, numbered 8N + 4k + 2*i5 + i3.
    """

    lengths: K33Lengths
    theta: np.ndarray
    solution: _Solution

    @classmethod
    def build(cls, lengths: K33Lengths, resolution: int, workers: int = 1) -> SweepGrid:
        lengths.require("G3")
        if resolution < 1:
            raise ValueError("resolution must be positive")
        theta = -np.pi + 2.0 * np.pi * np.arange(resolution) / resolution
        cos, sin = np.cos(theta), np.sin(theta)
        chunks = np.array_split(np.arange(resolution), max(1, workers))
        chunks = [ch for ch in chunks if len(ch)]
        if len(chunks) == 1:
            solution = _solve_theta(lengths, cos, sin)
        else:
            with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
                parts = list(
                    pool.map(lambda ch: _solve_theta(lengths, cos[ch], sin[ch]), chunks)
                )
            solution = _Solution.concat(parts)
        return cls(lengths, theta, solution)

    @property
    def size(self) -> int:
        return len(self.theta)

    @property
    def step(self) -> float:
        return 2.0 * math.pi / self.size

    @property
    def node_count(self) -> int:
        return 12 * self.size

    @property
    def gamma(self) -> np.ndarray:
        return self.solution.gamma

    @property
    def feasible(self) -> np.ndarray:
        return np.isfinite(self.solution.gamma)

    @property
    def continuum(self) -> np.ndarray:
        return np.isfinite(self.solution.cont_lo)

    def regular_id(self, k: np.ndarray | int, t: np.ndarray | int):
        return 8 * k + t

    def continuum_id(self, k, i5, i3):
        return 8 * self.size + 4 * k + 2 * i5 + i3

    def edges(self, regular: np.ndarray, continuum: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Adjacency between active cells: theta neighbours plus branch gluing."""
        n = self.size
        k = np.arange(n)
        nxt = (k + 1) % n
        rows: list[np.ndarray] = []
        cols: list[np.ndarray] = []

        def link(mask: np.ndarray, a: np.ndarray, b: np.ndarray) -> None:
            rows.append(np.asarray(a)[mask])
            cols.append(np.asarray(b)[mask])

        for t in range(SHEETS):
            link(regular[:, t] & regular[nxt, t], self.regular_id(k, t), self.regular_id(nxt, t))
        for i5 in (0, 1):
            for i3 in (0, 1):
                here = continuum[:, i5, i3]
                link(here & continuum[nxt, i5, i3],
                     self.continuum_id(k, i5, i3), self.continuum_id(nxt, i5, i3))
                for i2 in (0, 1):
                    t = 4 * i5 + 2 * i3 + i2
                    for other in (nxt, (k - 1) % n):
                        link(here & regular[other, t],
                             self.continuum_id(k, i5, i3), self.regular_id(other, t))

        for glue, t0, t1 in self.sibling_glue():
            link(glue & regular[:, t0] & regular[:, t1],
                 self.regular_id(k, t0), self.regular_id(k, t1))
        for glue, (a5, a3), (b5, b3) in self.continuum_glue():
            link(glue & continuum[:, a5, a3] & continuum[:, b5, b3],
                 self.continuum_id(k, a5, a3), self.continuum_id(k, b5, b3))
        return np.concatenate(rows), np.concatenate(cols)

    def sibling_glue(self) -> list[tuple[np.ndarray, int, int]]:
        """(mask over k, t0, t1) for sheets differing in one sign, glued where that branch folds."""
        _, tol_h = _tolerances(self.lengths)
        sol = self.solution
        glue5 = _glue_mask(sol.disc5, tol_h)
        glue3 = _glue_mask(sol.disc3, tol_h)
        glue2 = _glue_mask(sol.disc2, tol_h)
        pairs = []
        for i3 in (0, 1):
            for i2 in (0, 1):
                pairs.append((glue5, 2 * i3 + i2, 4 + 2 * i3 + i2))
        for i5 in (0, 1):
            for i2 in (0, 1):
                pairs.append((glue3, 4 * i5 + i2, 4 * i5 + 2 + i2))
            for i3 in (0, 1):
                pairs.append((glue2[:, i3], 4 * i5 + 2 * i3, 4 * i5 + 2 * i3 + 1))
        return pairs

    def continuum_glue(self) -> list[tuple[np.ndarray, tuple[int, int], tuple[int, int]]]:
        _, tol_h = _tolerances(self.lengths)
        glue5 = _glue_mask(self.solution.disc5, tol_h)
        glue3 = _glue_mask(self.solution.disc3, tol_h)
        return [(glue5, (0, i3), (1, i3)) for i3 in (0, 1)] + [
            (glue3, (i5, 0), (i5, 1)) for i5 in (0, 1)
        ]

    def label_components(
        self,
        regular: np.ndarray,
        continuum: np.ndarray,
        extra_nodes: int = 0,
        extra_edges: tuple[list[int], list[int]] = ([], []),
    ) -> np.ndarray:
        """Component label of every node id (inactive nodes get singleton labels)."""
        rows, cols = self.edges(regular, continuum)
        rows = np.concatenate([rows, np.asarray(extra_edges[0], dtype=rows.dtype)])
        cols = np.concatenate([cols, np.asarray(extra_edges[1], dtype=cols.dtype)])
        total = self.node_count + extra_nodes
        adjacency = coo_matrix(
            (np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(total, total)
        )
        _, labels = connected_components(adjacency, directed=False)
        return labels

    def sheet_boundary(self, k: int, t: int, direction: int) -> float:
        """Last feasible theta of sheet t leaving cell k towards k + direction."""
        inside = float(self.theta[k])
        outside = inside + direction * self.step
        while abs(outside - inside) > BISECTION_TOL:
            mid = 0.5 * (inside + outside)
            if math.isfinite(sheet_gamma(self.lengths, mid, t)):
                inside = mid
            else:
                outside = mid
        return inside


def sweep_G3(
    lengths: K33Lengths, resolution: int, *, workers: int = 1
) -> list[tuple[BranchConfig, float]]:
    """γ = d(p2, p5) for every feasible (theta, sign tuple) on the grid.

    Ordered by theta, then sign tuple. Cells where two locating circles
    coincide are omitted.
    """
    grid = SweepGrid.build(lengths, resolution, workers)
    ks, ts = np.nonzero(grid.feasible)
    return [
        (BranchConfig(float(grid.theta[k]), SIGN_TUPLES[t]), float(grid.gamma[k, t]))
        for k, t in zip(ks.tolist(), ts.tolist())
    ]


def _refine_extreme(fun, lo: float, hi: float, maximize: bool) -> float | None:
    # Bounded scalar search for a local extremum of fun on [lo, hi].
    sign = -1.0 if maximize else 1.0

    def objective(x: float) -> float:
        value = fun(x)
        return sign * value if math.isfinite(value) else math.inf

    result = minimize_scalar(objective, bounds=(lo, hi), method="bounded",
                             options={"xatol": 1e-12})
    value = fun(float(result.x))
    return value if math.isfinite(value) else None


def default_merge_gap(lengths: K33Lengths) -> float:
    """1e-3 times the sum of the lengths a..beta."""

    return MERGE_GAP_RTOL * lengths.scale


def gamma_set(
    lengths: K33Lengths,
    resolution: int = 20000,
    merge_gap: float | None = None,
    *,
    workers: int = 1,
    include_coincident: bool = True,
) -> StageReport:
    """Values of gamma = v2v5 keeping K33 realizable, from the G3 sweep.

    Each connected region of feasible cells contributes the range of γ over
    its cells, widened by bounded refinement around its extreme cells and by
    bisection to 1e-10 at the ends of its sheets. Region ranges are united
    and gaps below `merge_gap` closed.

    Raises:
        ValueError: resolution below 1000.
    """
    lengths.require("G3")
    if resolution < MIN_RESOLUTION:
        raise ValueError(f"resolution must be at least {MIN_RESOLUTION}, got {resolution}")
    gap = default_merge_gap(lengths) if merge_gap is None else merge_gap

    grid = SweepGrid.build(lengths, resolution, workers)
    regular = grid.feasible
    continuum = grid.continuum if include_coincident else np.zeros_like(grid.continuum)
    labels = grid.label_components(regular, continuum)

    n = grid.size
    reg_k, reg_t = np.nonzero(regular)
    cont_k, cont_i5, cont_i3 = np.nonzero(continuum)
    reg_ids = grid.regular_id(reg_k, reg_t)
    cont_ids = grid.continuum_id(cont_k, cont_i5, cont_i3)
    if len(reg_ids) + len(cont_ids) == 0:
        logger.info("gamma-set is empty: no feasible sweep cell")
        return StageReport("gamma", IntervalSet.empty())

    node_ids = np.concatenate([reg_ids, cont_ids])
    node_lo = np.concatenate([grid.gamma[reg_k, reg_t], grid.solution.cont_lo[cont_k, cont_i5, cont_i3]])
    node_hi = np.concatenate([grid.gamma[reg_k, reg_t], grid.solution.cont_hi[cont_k, cont_i5, cont_i3]])
    region_keys, region_of = np.unique(labels[node_ids], return_inverse=True)
    count = len(region_keys)
    lo = np.full(count, np.inf)
    hi = np.full(count, -np.inf)
    np.minimum.at(lo, region_of, node_lo)
    np.maximum.at(hi, region_of, node_hi)

    regular_region = region_of[: len(reg_ids)]

    # Sheet ends: bisection on sheet feasibility towards the infeasible neighbour.
    for direction in (1, -1):
        nbr = (reg_k + direction) % n
        ends = np.nonzero(~regular[nbr, reg_t])[0]
        for j in ends.tolist():
            k, t = int(reg_k[j]), int(reg_t[j])
            edge = grid.sheet_boundary(k, t, direction)
            value = sheet_gamma(lengths, edge, t)
            r = regular_region[j]
            lo[r] = min(lo[r], value)
            hi[r] = max(hi[r], value)

    # Interior extrema: bounded search between the neighbouring grid angles.
    order = np.lexsort((grid.gamma[reg_k, reg_t], regular_region))
    first = np.nonzero(np.diff(np.concatenate([[-1], regular_region[order]])))[0]
    last = np.concatenate([first[1:] - 1, [len(order) - 1]]) if len(order) else first
    for start, stop in zip(first.tolist(), last.tolist()):
        r = regular_region[order[start]]
        for j, maximize in ((order[start], False), (order[stop], True)):
            k, t = int(reg_k[j]), int(reg_t[j])
            if not (regular[(k - 1) % n, t] and regular[(k + 1) % n, t]):
                continue
            centre = float(grid.theta[k])
            refined = _refine_extreme(
                lambda x, t=t: sheet_gamma(lengths, x, t),
                centre - grid.step,
                centre + grid.step,
                maximize,
            )
            if refined is not None:
                lo[r] = min(lo[r], refined)
                hi[r] = max(hi[r], refined)

    feasible = IntervalSet(tuple(zip(lo.tolist(), hi.tolist()))).merge_gaps(gap)
    regions = _summarize_regions(grid, region_of, reg_k, reg_t, cont_k, cont_i5, cont_i3, lo, hi)
    bound_exceeded = len(feasible) > STAGE_INTERVAL_BOUND["gamma"]
    if bound_exceeded:
        logger.warning(
            "gamma-set has %d intervals, above the bound of %d: %s",
            len(feasible),
            STAGE_INTERVAL_BOUND["gamma"],
            feasible.format(),
        )
    logger.info("gamma-set %s from %d regions", feasible.format(), count)
    return StageReport("gamma", feasible, None, regions, bound_exceeded)


def _summarize_regions(
    grid: SweepGrid,
    region_of: np.ndarray,
    reg_k: np.ndarray,
    reg_t: np.ndarray,
    cont_k: np.ndarray,
    cont_i5: np.ndarray,
    cont_i3: np.ndarray,
    lo: np.ndarray,
    hi: np.ndarray,
) -> tuple[RegionSummary, ...]:
    node_k = np.concatenate([reg_k, cont_k])
    node_sheet = [format_signs(SIGN_TUPLES[t]) for t in reg_t.tolist()] + [
        format_signs((1 - 2 * i5, 1 - 2 * i3, 0))[:2] + "*"
        for i5, i3 in zip(cont_i5.tolist(), cont_i3.tolist())
    ]
    is_continuum = np.concatenate([np.zeros(len(reg_k), bool), np.ones(len(cont_k), bool)])
    order = np.argsort(region_of, kind="stable")
    groups = np.split(order, np.nonzero(np.diff(region_of[order]))[0] + 1)
    summaries = []
    for r, members in enumerate(groups):
        thetas = grid.theta[node_k[members]]
        summaries.append(
            RegionSummary(
                sheets=tuple(sorted({node_sheet[j] for j in members.tolist()})),
                theta_lo=float(thetas.min()),
                theta_hi=float(thetas.max()),
                gamma_lo=float(lo[r]),
                gamma_hi=float(hi[r]),
                cells=len(members),
                continuum=bool(is_continuum[members].any()),
            )
        )
    summaries.sort(key=lambda s: (s.gamma_lo, s.gamma_hi, s.sheets))
    return tuple(summaries)


def _solve_phi(lengths: K33Lengths, cos: np.ndarray, sin: np.ndarray) -> np.ndarray:
    # γ for every (s6, s5, s2) branch when the free parameter is the angle of p3 about p4.
    a, b, c, d, e, f, alpha, beta = lengths.values()[:8]
    tol_d, tol_h = _tolerances(lengths)
    p4 = np.zeros(2)
    p1 = np.array([alpha, 0.0])
    with np.errstate(invalid="ignore", divide="ignore"):
        p3 = np.column_stack((d * cos, d * sin))
        p6, _, _ = _intersect(p1, a, p3, beta, tol_d, tol_h)
        p2, _, _ = _intersect(p1, b, p3, c, tol_d, tol_h)
        gamma = np.empty((len(cos), SHEETS))
        for i6 in (0, 1):
            p5, _, _ = _intersect(p4, e, p6[:, i6], f, tol_d, tol_h)
            for i5 in (0, 1):
                for i2 in (0, 1):
                    gamma[:, 4 * i6 + 2 * i5 + i2] = _distance(p2[:, i2], p5[:, i5])
    return gamma


def _runs(mask: np.ndarray) -> list[np.ndarray]:
    # Index arrays of the circular runs of True in mask.
    size = len(mask)
    if mask.all():
        return [np.arange(size)]
    padded = np.concatenate([[False], mask, [False]]).astype(np.int8)
    starts = np.nonzero(np.diff(padded) == 1)[0]
    stops = np.nonzero(np.diff(padded) == -1)[0]
    runs = [np.arange(s, e) for s, e in zip(starts, stops)]
    if len(runs) > 1 and mask[0] and mask[-1]:
        runs[0] = np.concatenate([runs.pop(), runs[0]])
    return runs


def gamma_set_oracle(
    lengths: K33Lengths,
    samples: int = 200_000,
    seed: int = 0,
    merge_gap: float | None = None,
) -> IntervalSet:
    """γ-set of generic configurations, swept by the angle of p3 about p4.

    Independent of the theta sweep: angles are random (seeded), branches are
    (s6, s5, s2), and every run of feasible samples on a branch contributes
    its γ-range after bisection at the run ends and bounded refinement of its
    extremes. Configurations with coincident locating circles are not
    sampled, and a = 0 leaves nothing to sample.
    """
    lengths.require("G3")
    gap = default_merge_gap(lengths) if merge_gap is None else merge_gap
    rng = np.random.default_rng(seed)
    phi = np.sort(rng.uniform(-np.pi, np.pi, samples))
    gamma = _solve_phi(lengths, np.cos(phi), np.sin(phi))
    feasible = np.isfinite(gamma)

    def at(x: float, t: int) -> float:
        return float(_solve_phi(lengths, np.array([math.cos(x)]), np.array([math.sin(x)]))[0, t])

    def angle(j: int) -> float:
        # Unwrapped angle of sample j (indices may run past either end).
        return float(phi[j % samples] + 2.0 * np.pi * (j // samples))

    pieces: list[tuple[float, float]] = []
    for t in range(SHEETS):
        for run in _runs(feasible[:, t]):
            # Unwrap indices so the run is increasing.
            idx = run.copy()
            idx[1:] += samples * np.cumsum(np.diff(run) < 0)
            values = gamma[run, t]
            lo, hi = float(values.min()), float(values.max())
            if len(run) < samples:
                for inside, outside in ((idx[0], idx[0] - 1), (idx[-1], idx[-1] + 1)):
                    x_in, x_out = angle(int(inside)), angle(int(outside))
                    while abs(x_out - x_in) > BISECTION_TOL:
                        mid = 0.5 * (x_in + x_out)
                        if math.isfinite(at(mid, t)):
                            x_in = mid
                        else:
                            x_out = mid
                    edge = at(x_in, t)
                    lo, hi = min(lo, edge), max(hi, edge)
            for pos, maximize in ((int(np.argmin(values)), False), (int(np.argmax(values)), True)):
                if 0 < pos < len(run) - 1:
                    refined = _refine_extreme(
                        lambda x, t=t: at(x, t),
                        angle(int(idx[pos - 1])),
                        angle(int(idx[pos + 1])),
                        maximize,
                    )
                    if refined is not None:
                        lo, hi = min(lo, refined), max(hi, refined)
            pieces.append((lo, hi))
    result = IntervalSet(tuple(pieces)).merge_gaps(gap)
    logger.info("gamma-set oracle %s from %d samples", result.format(), samples)
    return result


@dataclass(frozen=True)
class StagedReport:
    """The feasible sets of every stage reached by a chain of choices."""

    lengths: K33Lengths
    reports: tuple[StageReport, ...]

    def stage(self, name: StageName) -> StageReport | None:
        return next((r for r in self.reports if r.stage == name), None)

    def to_json(self) -> dict:
        return {
            "lengths": self.lengths.to_json(),
            "stages": [r.to_json() for r in self.reports],
        }


def _check_choice(name: str, value: float | None, report: StageReport, tol: float) -> bool:
    # False when the chain stops here; raises when the choice is out of its set.
    if value is None:
        return False
    if not report.feasible_set.contains(value, tol):
        raise StageChoiceError(
            f"{name} = {value:.10g} is outside the feasible set {report.feasible_set.format()}"
        )
    return True


def staged_report(
    lengths: K33Lengths,
    resolution: int = 20000,
    merge_gap: float | None = None,
    *,
    workers: int = 1,
) -> StagedReport:
    """Walk the chain f -> alpha -> beta -> gamma as far as lengths are given.

    Every stage whose predecessors are chosen is reported; a chosen value
    outside its stage's set stops the walk.

    Raises:
        StageChoiceError: the first out-of-set choice, citing the set.
    """
    a, b, c, d, e = lengths.values()[:5]
    tol = _choice_tol(lengths.scale)
    reports = [f_interval(a, b, c, d, e)]
    if _check_choice("f", lengths.f, reports[-1], tol):
        reports.append(alpha_interval(a, b, c, d, e, lengths.f))
        if _check_choice("alpha", lengths.alpha, reports[-1], tol):
            reports.append(beta_set(lengths))
            if _check_choice("beta", lengths.beta, reports[-1], tol):
                reports.append(
                    gamma_set(lengths.replace(gamma=None), resolution, merge_gap, workers=workers)
                )
                gap = default_merge_gap(lengths) if merge_gap is None else merge_gap
                _check_choice("gamma", lengths.gamma, reports[-1], gap)
    return StagedReport(lengths, tuple(reports))


__all__ = [
    "EDGE_OF_FIELD",
    "K33_VERTICES",
    "LENGTH_FIELDS",
    "SIGN_TUPLES",
    "STAGE_INTERVAL_BOUND",
    "BranchConfig",
    "GraphStage",
    "K33Lengths",
    "RegionSummary",
    "Signs",
    "StageName",
    "StageReport",
    "StagedReport",
    "SweepGrid",
    "alpha_interval",
    "beta_set",
    "coincident_configuration",
    "configuration_at",
    "default_merge_gap",
    "f_interval",
    "format_signs",
    "gamma_set",
    "gamma_set_oracle",
    "sheet_gamma",
    "sheet_index",
    "staged_report",
    "sweep_G3",
    "workspaces_G2",
]
