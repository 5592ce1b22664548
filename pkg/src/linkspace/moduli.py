"""
Connected components of pinned configuration spaces.

Two counters share one report type:

* `k33_component_count` walks the G3 sweep grid of `k33_extension`, keeps
  the cells where d(p2, p5) meets the chosen gamma (flat stretches,
  coincident-circle continua and bisection-confirmed roots) and counts the
  connected clusters of the cell graph. Labelled `sweep-exact`.
* `generic_component_count` works for any graph: seeded least-squares
  samples are pinned, deduplicated and joined by straight-line paths
  re-projected onto the constraint set knot by knot. Labelled `sampling`;
  its counts are numerical evidence, not proofs.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Literal, TypeAlias

import numpy as np
from networkx.utils import UnionFind

from .config import MIN_RESOLUTION
from .graph_core import PinnedFrame, Realization, WeightedGraph, describe_violations, validate
from .intervals_arcs import IntervalSet
from .k33_extension import (
    K33_VERTICES,
    SIGN_TUPLES,
    BISECTION_TOL,
    K33Lengths,
    SweepGrid,
    alpha_interval,
    beta_set,
    coincident_configuration,
    configuration_at,
    f_interval,
    gamma_set,
    sheet_gamma,
)
from .realizability import MAX_ITERATIONS, RealizeReport, StressProblem
from .utils.errors import GraphError, StageError

logger = logging.getLogger("linkspace")

Method: TypeAlias = Literal["sweep-exact", "sampling"]
DimensionFlag: TypeAlias = Literal["isolated-point", "positive-dimensional"]

ALLOWED_COUNTS = frozenset({0, 1, 2, 4, 6, 8})
K33_FRAME = PinnedFrame("v4", "v1")
FLAT_RTOL = 1e-7
ROOT_CONFIRM_RTOL = 1e-6
MIN_FLAT_CELLS = 10
DEDUP_TOL = 1e-6
JUMP_FACTOR = 4.0


@dataclass(frozen=True, eq=False)
class ConfigPoint:
    """Pinned vertex coordinates; distance is the max vertex displacement."""

    vertices: tuple[str, ...]
    coords: np.ndarray

    @classmethod
    def from_realization(cls, r: Realization, vertices: Iterable[str]) -> ConfigPoint:
        vertices = tuple(vertices)
        return cls(vertices, r.as_array(vertices))

    @classmethod
    def from_flat(cls, vertices: Iterable[str], x: np.ndarray) -> ConfigPoint:
        vertices = tuple(vertices)
        return cls(vertices, np.asarray(x, dtype=float).reshape(len(vertices), 2))

    @property
    def flat(self) -> np.ndarray:
        return self.coords.ravel()

    def to_realization(self) -> Realization:
        return Realization.from_array(self.vertices, self.coords)

    def distance(self, other: ConfigPoint) -> float:
        diff = self.coords - other.coords
        return float(np.sqrt(np.sum(diff * diff, axis=1)).max())

    def reflected(self) -> ConfigPoint:
        return ConfigPoint(self.vertices, self.coords * np.array([1.0, -1.0]))

    def to_json(self) -> dict[str, list[float]]:
        return self.to_realization().to_json()


@dataclass(frozen=True)
class PathCertificate:
    """Projected knots joining sample `source` to sample `target`."""

    source: int
    target: int
    knots: tuple[ConfigPoint, ...]

    def max_residual(self, g: WeightedGraph) -> float:
        """Largest edge residual over all knots, recomputed from scratch."""
        return max(k.to_realization().max_residual(g) for k in self.knots)

    def to_json(self) -> dict:
        return {"source": self.source, "target": self.target, "knots": len(self.knots)}


@dataclass(frozen=True)
class ComponentReport:
    """Component count with one representative configuration per component."""

    count: int
    representatives: tuple[ConfigPoint, ...]
    method: Method
    dimension_flags: tuple[DimensionFlag, ...]
    frame: PinnedFrame
    certificates: tuple[PathCertificate, ...] = ()
    evidence: RealizeReport | None = None
    feasible_samples: int = 0

    @property
    def count_empty_as_one(self) -> int:
        # The empty space counts as one component under the classical convention.
        return max(self.count, 1)

    def to_json(self) -> dict:
        return {
            "count": self.count,
            "count_empty_as_one": self.count_empty_as_one,
            "method": self.method,
            "frame": [self.frame.origin, self.frame.axis],
            "components": [
                {"dimension": flag, "representative": rep.to_json()}
                for flag, rep in zip(self.dimension_flags, self.representatives)
            ],
            "certificates": [c.to_json() for c in self.certificates],
            "feasible_samples": self.feasible_samples,
            "evidence": self.evidence.to_json() if self.evidence else None,
        }


@dataclass(frozen=True)
class ParityCheck:
    """Whether a K33 component count is one of 0, 1, 2, 4, 6, 8."""

    consistent: bool
    count: int
    count_empty_as_one: int
    violation: str | None = None
    report: ComponentReport | None = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {
            "consistent": self.consistent,
            "count": self.count,
            "count_empty_as_one": self.count_empty_as_one,
            "violation": self.violation,
        }


@dataclass(frozen=True)
class _Root:
    theta: float
    sheet: int


def _bisect_root(lengths: K33Lengths, sheet: int, lo: float, hi: float, gamma: float) -> float | None:
    # Sign change of d(p2, p5) - gamma on one sheet between lo and hi.
    f_lo = sheet_gamma(lengths, lo, sheet) - gamma
    while abs(hi - lo) > BISECTION_TOL:
        mid = 0.5 * (lo + hi)
        f_mid = sheet_gamma(lengths, mid, sheet) - gamma
        if not math.isfinite(f_mid):
            return None
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _confirmed(lengths: K33Lengths, root: _Root, gamma: float) -> bool:
    value = sheet_gamma(lengths, root.theta, root.sheet)
    ok = math.isfinite(value) and abs(value - gamma) <= ROOT_CONFIRM_RTOL * (1.0 + gamma)
    if not ok:
        logger.warning(
            "Root on sheet %d at theta=%.12g failed confirmation (gamma=%.12g)",
            root.sheet,
            root.theta,
            value,
        )
    return ok


def _find_roots(
    grid: SweepGrid, gamma: float, flat: np.ndarray
) -> list[_Root]:
    lengths = grid.lengths
    n = grid.size
    residual = grid.gamma - gamma
    feasible = grid.feasible
    k = np.arange(n)
    nxt = (k + 1) % n
    roots: list[_Root] = []

    crossing = (
        feasible & feasible[nxt] & ~flat & ~flat[nxt] & (residual * residual[nxt] < 0)
    )
    for kk, t in zip(*np.nonzero(crossing)):
        lo = float(grid.theta[kk])
        theta = _bisect_root(lengths, int(t), lo, lo + grid.step, gamma)
        if theta is not None:
            roots.append(_Root(theta, int(t)))

    # Roots between a cell and the fold where its sheet meets a sibling.
    flat_tol = FLAT_RTOL * (1.0 + gamma)
    seen: set[tuple[int, int, int]] = set()
    for glue, t0, t1 in grid.sibling_glue():
        sites = glue & feasible[:, t0] & feasible[:, t1] & ~flat[:, t0] & ~flat[:, t1]
        for kk in np.nonzero(sites)[0].tolist():
            for direction in (1, -1):
                other = (kk + direction) % n
                if feasible[other, t0] or feasible[other, t1]:
                    continue
                if (kk, direction, t0) in seen and (kk, direction, t1) in seen:
                    continue
                fold = grid.sheet_boundary(kk, t0, direction)
                at_fold = sheet_gamma(lengths, fold, t0) - gamma
                if not math.isfinite(at_fold):
                    continue
                if abs(at_fold) <= flat_tol:
                    if (kk, direction, t0) not in seen and (kk, direction, t1) not in seen:
                        roots.append(_Root(fold, t0))
                    seen.update({(kk, direction, t0), (kk, direction, t1)})
                    continue
                for t in (t0, t1):
                    if (kk, direction, t) in seen:
                        continue
                    seen.add((kk, direction, t))
                    if residual[kk, t] * at_fold < 0:
                        lo, hi = sorted((float(grid.theta[kk]), fold))
                        theta = _bisect_root(lengths, t, lo, hi, gamma)
                        if theta is not None:
                            roots.append(_Root(theta, t))
    return [r for r in roots if _confirmed(lengths, r, gamma)]


def k33_component_count(
    lengths: K33Lengths, resolution: int = 20000, *, workers: int = 1
) -> ComponentReport:
    """Count the components of the pinned K33 configuration space.

    Cells of the G3 sweep with |d(p2, p5) - gamma| ≤ 1e-7·(1 + gamma), continuum
    cells whose γ-range contains gamma and bisection-confirmed roots are the
    nodes; theta adjacency and branch gluing at folds are the edges. A
    cluster with at least 10 flat or continuum cells is positive-dimensional,
    anything smaller an isolated point. Representatives are pinned at (v4, v1).

    Raises:
        ValueError: resolution below 1000.
    """
    lengths.require("K33")
    if resolution < MIN_RESOLUTION:
        raise ValueError(f"resolution must be at least {MIN_RESOLUTION}, got {resolution}")
    gamma = float(lengths.gamma)  # type: ignore[arg-type]
    tol = FLAT_RTOL * (1.0 + gamma)

    grid = SweepGrid.build(lengths, resolution, workers)
    sol = grid.solution
    flat = grid.feasible & (np.abs(grid.gamma - gamma) <= tol)
    continuum = grid.continuum & (sol.cont_lo - tol <= gamma) & (gamma <= sol.cont_hi + tol)
    roots = _find_roots(grid, gamma, flat)
    labels = grid.label_components(flat, continuum, extra_nodes=len(roots))

    flat_k, flat_t = np.nonzero(flat)
    cont_k, cont_i5, cont_i3 = np.nonzero(continuum)
    node_ids = np.concatenate(
        [
            grid.regular_id(flat_k, flat_t),
            grid.continuum_id(cont_k, cont_i5, cont_i3),
            grid.node_count + np.arange(len(roots)),
        ]
    ).astype(np.int64)
    if not len(node_ids):
        logger.info("K33 moduli space is empty at gamma=%.12g", gamma)
        return ComponentReport(0, (), "sweep-exact", (), K33_FRAME)

    clusters, first_node, cluster_of = np.unique(
        labels[node_ids], return_index=True, return_inverse=True
    )
    cells = np.bincount(
        cluster_of[: len(flat_k) + len(cont_k)], minlength=len(clusters)
    )

    representatives: list[tuple[int, ConfigPoint, DimensionFlag]] = []
    n_flat, n_cont = len(flat_k), len(cont_k)
    for c, j in enumerate(first_node.tolist()):
        node = int(node_ids[j])
        if j < n_flat:
            r = configuration_at(lengths, float(grid.theta[flat_k[j]]), SIGN_TUPLES[flat_t[j]])
        elif j < n_flat + n_cont:
            i = j - n_flat
            r = coincident_configuration(
                lengths,
                float(grid.theta[cont_k[i]]),
                (1 - 2 * int(cont_i5[i]), 1 - 2 * int(cont_i3[i])),
                gamma,
            )
        else:
            root = roots[j - n_flat - n_cont]
            r = configuration_at(lengths, root.theta, SIGN_TUPLES[root.sheet])
        assert r is not None
        flag: DimensionFlag = (
            "positive-dimensional" if cells[c] >= MIN_FLAT_CELLS else "isolated-point"
        )
        representatives.append((node, ConfigPoint.from_realization(r, K33_VERTICES), flag))

    representatives.sort(key=lambda item: item[0])
    logger.info(
        "K33 moduli space at gamma=%.12g: %d components (%d roots, %d flat cells)",
        gamma,
        len(representatives),
        len(roots),
        int(flat.sum()),
    )
    return ComponentReport(
        count=len(representatives),
        representatives=tuple(rep for _, rep, _ in representatives),
        method="sweep-exact",
        dimension_flags=tuple(flag for _, _, flag in representatives),
        frame=K33_FRAME,
    )


def _pin(vertices: tuple[str, ...], x: np.ndarray, frame: PinnedFrame) -> np.ndarray:
    return Realization.from_array(vertices, x).pinned(frame).as_array(vertices).ravel()


def _connect(
    problem: StressProblem,
    vertices: tuple[str, ...],
    frame: PinnedFrame,
    start: ConfigPoint,
    end: ConfigPoint,
    knots: int,
    iterations: int,
) -> tuple[ConfigPoint, ...] | None:
    # Walk from start towards end in `knots` steps, projecting every knot
    # back onto the constraint set; None on an infeasible knot or a jump.
    step = start.distance(end) / knots
    limit = JUMP_FACTOR * step + DEDUP_TOL
    chain = [start]
    current = start.flat
    for remaining in range(knots, 0, -1):
        guess = current + (end.flat - current) / remaining
        x = problem.descend(guess, iterations)
        if problem.max_residual(x) > problem.tolerance:
            return None
        knot = ConfigPoint.from_flat(vertices, _pin(vertices, x, frame))
        if knot.distance(ConfigPoint.from_flat(vertices, guess)) > limit:
            return None
        chain.append(knot)
        current = knot.flat
    if chain[-1].distance(end) > limit:
        return None
    return tuple(chain)


def generic_component_count(
    g: WeightedGraph,
    pin: PinnedFrame,
    samples: int = 500,
    seed: int = 0,
    *,
    knots: int = 32,
    descent_iterations: int = 100,
    neighbors: int = 12,
    workers: int = 1,
) -> ComponentReport:
    """Count components of the pinned configuration space by sampling.

    Every seeded start (rng seeded with [seed, i]) is descended to a local
    minimum of the stress; feasible minima are pinned and deduplicated
    within 1e-6. Each point tries to join its `neighbors` nearest points by
    a path of `knots` projected knots; joined pairs keep their knots as a
    certificate. No feasible point gives count 0 with the best attempt as
    evidence.

    Raises:
        GraphError: g violates its invariants or the pin has no positive edge.
    """
    problems = validate(g)
    if problems:
        raise GraphError(describe_violations(problems))
    pin.check(g)
    if samples < 1:
        raise ValueError("samples must be at least 1")
    if knots < 2:
        raise ValueError("knots must be at least 2")

    vertices = g.vertices
    problem = StressProblem(g)

    def run(index: int) -> tuple[float, np.ndarray]:
        x = problem.descend(problem.random_start(seed, index), MAX_ITERATIONS)
        return problem.max_residual(x), x

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        results = list(pool.map(run, range(samples)))

    points: list[ConfigPoint] = []
    for index, (res, x) in enumerate(results):
        if res > problem.tolerance:
            continue
        point = ConfigPoint.from_flat(vertices, _pin(vertices, x, pin))
        if all(point.distance(p) > DEDUP_TOL for p in points):
            points.append(point)
        logger.debug("sample %d residual %.3e", index, res)

    if not points:
        residuals = [res for res, _ in results]
        best = int(np.argmin(residuals))
        realization = Realization.from_array(vertices, results[best][1]).pinned(pin)
        evidence = RealizeReport(
            best_realization=realization,
            best_residual=residuals[best],
            restarts_used=samples,
            verdict="no-realization-found",
            tolerance=problem.tolerance,
            edge_residuals=tuple(realization.residuals(g).tolist()),
            restart_residuals=tuple(residuals),
        )
        logger.info("No feasible sample in %d starts (best residual %.3e)", samples, residuals[best])
        return ComponentReport(0, (), "sampling", (), pin, evidence=evidence)

    coords = np.stack([p.coords for p in points])
    diff = coords[:, None, :, :] - coords[None, :, :, :]
    dist = np.sqrt(np.sum(diff * diff, axis=3)).max(axis=2)
    count = len(points)
    pairs: set[tuple[int, int]] = set()
    for i in range(count):
        order = [j for j in np.argsort(dist[i], kind="stable").tolist() if j != i]
        for j in order[:neighbors]:
            pairs.add((min(i, j), max(i, j)))
    candidates = sorted(pairs, key=lambda ij: (dist[ij], ij[0], ij[1]))

    clusters = UnionFind(range(count))
    certificates: list[PathCertificate] = []
    for i, j in candidates:
        if clusters[i] == clusters[j]:
            continue
        chain = _connect(problem, vertices, pin, points[i], points[j], knots, descent_iterations)
        if chain is None:
            logger.debug("no path between samples %d and %d", i, j)
            continue
        clusters.union(i, j)
        certificates.append(PathCertificate(i, j, chain))

    members: dict[int, list[int]] = {}
    for i in range(count):
        members.setdefault(clusters[i], []).append(i)
    groups = sorted(members.values(), key=lambda m: m[0])
    flags: tuple[DimensionFlag, ...] = tuple(
        "isolated-point" if len(m) == 1 else "positive-dimensional" for m in groups
    )
    logger.info(
        "Sampling found %d components from %d distinct feasible points", len(groups), count
    )
    return ComponentReport(
        count=len(groups),
        representatives=tuple(points[m[0]] for m in groups),
        method="sampling",
        dimension_flags=flags,
        frame=pin,
        certificates=tuple(certificates),
        feasible_samples=count,
    )


def component_parity_check(
    lengths: K33Lengths, resolution: int = 20000, *, workers: int = 1
) -> ParityCheck:
    """Run `k33_component_count` and test the count against {0, 1, 2, 4, 6, 8}."""

    report = k33_component_count(lengths, resolution, workers=workers)
    consistent = report.count in ALLOWED_COUNTS
    violation = None
    if not consistent:
        violation = f"{report.count} components is not one of {sorted(ALLOWED_COUNTS)}"
        logger.warning("Parity check failed: %s", violation)
    return ParityCheck(
        consistent=consistent,
        count=report.count,
        count_empty_as_one=report.count_empty_as_one,
        violation=violation,
        report=report,
    )


def _choose_inside(rng: np.random.Generator, feasible: IntervalSet) -> float:
    # Uniform over the set's measure; a set of isolated points picks one of them.
    pieces = list(feasible)
    widths = np.array([hi - lo for lo, hi in pieces])
    if widths.sum() > 0:
        lo, hi = pieces[int(rng.choice(len(pieces), p=widths / widths.sum()))]
    else:
        lo, hi = pieces[int(rng.integers(len(pieces)))]
    return float(rng.uniform(lo, hi))


def random_feasible_k33(
    rng: np.random.Generator,
    low: float = 0.2,
    high: float = 3.0,
    resolution: int = 4000,
    *,
    workers: int = 1,
) -> K33Lengths | None:
    """Draw a, ..., e uniformly from [low, high], then each later length inside its stage set.

    Returns None when rounding at a stage boundary leaves a later stage empty.
    """
    a, b, c, d, e = (float(x) for x in rng.uniform(low, high, 5))
    try:
        f = _choose_inside(rng, f_interval(a, b, c, d, e).feasible_set)
        alpha = _choose_inside(rng, alpha_interval(a, b, c, d, e, f).feasible_set)
        lengths = K33Lengths(a, b, c, d, e, f, alpha)
        lengths = lengths.replace(beta=_choose_inside(rng, beta_set(lengths).feasible_set))
    except StageError as exc:
        logger.debug("Skipping random K33 instance: %s", exc)
        return None
    gammas = gamma_set(lengths, resolution, 0.0, workers=workers).feasible_set
    if gammas.is_empty:
        return None
    return lengths.replace(gamma=_choose_inside(rng, gammas))


@dataclass(frozen=True)
class ParitySurvey:
    """Parity checks over seeded random feasible K33 instances."""

    seed: int
    instances: tuple[K33Lengths, ...]
    checks: tuple[ParityCheck, ...]
    skipped: int = 0

    @property
    def violations(self) -> list[tuple[K33Lengths, ParityCheck]]:
        return [(k, c) for k, c in zip(self.instances, self.checks) if not c.consistent]

    @property
    def count_histogram(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for check in self.checks:
            counts[check.count] = counts.get(check.count, 0) + 1
        return dict(sorted(counts.items()))

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "instances": len(self.instances),
            "skipped": self.skipped,
            "count_histogram": {str(k): v for k, v in self.count_histogram.items()},
            "violations": [
                {"lengths": k.to_json(), **c.to_json()} for k, c in self.violations
            ],
        }


def parity_survey(
    trials: int,
    seed: int = 0,
    *,
    low: float = 0.2,
    high: float = 3.0,
    resolution: int = 4000,
    workers: int = 1,
) -> ParitySurvey:
    """Run `component_parity_check` on `trials` random feasible K33 instances.

    Instances come from `random_feasible_k33` with one generator seeded by
    `seed`, so a survey is reproducible. Violations are returned, not raised.
    """
    rng = np.random.default_rng(seed)
    instances: list[K33Lengths] = []
    checks: list[ParityCheck] = []
    skipped = 0
    for _ in range(trials):
        lengths = random_feasible_k33(rng, low, high, resolution, workers=workers)
        if lengths is None:
            skipped += 1
            continue
        instances.append(lengths)
        checks.append(component_parity_check(lengths, resolution, workers=workers))
    survey = ParitySurvey(seed, tuple(instances), tuple(checks), skipped)
    logger.info(
        "Parity survey seed=%d: %d instances, %d skipped, counts %s, %d violations",
        seed,
        len(instances),
        skipped,
        survey.count_histogram,
        len(survey.violations),
    )
    return survey



@dataclass(frozen=True)
class VertexWorkspace:
    """Angular arcs (radians, counter-clockwise) of one vertex about its pinned centre."""

    vertex: str
    center: str
    arcs: tuple[tuple[float, float], ...]

    @property
    def connected(self) -> bool:
        return len(self.arcs) == 1

    def to_json(self) -> dict:
        return {
            "vertex": self.vertex,
            "center": self.center,
            "arcs": [list(a) for a in self.arcs],
            "connected": self.connected,
        }


def _angular_arcs(angles: np.ndarray, gap: float) -> tuple[tuple[float, float], ...]:
    if not len(angles):
        return ()
    a = np.sort(np.asarray(angles, dtype=float))
    diffs = np.diff(a, append=a[0] + 2.0 * math.pi)
    breaks = np.flatnonzero(diffs > gap)
    if not len(breaks):
        return ((-math.pi, math.pi),)
    arcs = []
    for j, stop_idx in enumerate(breaks.tolist()):
        start = float(a[(breaks[j - 1] + 1) % len(a)])
        stop = float(a[stop_idx])
        if stop < start:
            stop += 2.0 * math.pi
        arcs.append((start, stop))
    return tuple(sorted(arcs))


def k33_workspaces(
    lengths: K33Lengths,
    resolution: int = 20000,
    *,
    workers: int = 1,
    gap: float = 0.05,
) -> dict[str, VertexWorkspace]:
    """Workspaces of v2, v6 (about p1) and v3, v5 (about p4) over the K33 moduli space.

    Angles of every hit cell and root are grouped into arcs separated by
    more than `gap` radians.
    """
    lengths.require("K33")
    if resolution < MIN_RESOLUTION:
        raise ValueError(f"resolution must be at least {MIN_RESOLUTION}, got {resolution}")
    gamma = float(lengths.gamma)  # type: ignore[arg-type]
    tol = FLAT_RTOL * (1.0 + gamma)
    grid = SweepGrid.build(lengths, resolution, workers)
    sol = grid.solution
    p1 = np.array([lengths.alpha, 0.0])

    flat = grid.feasible & (np.abs(grid.gamma - gamma) <= tol)
    continuum = grid.continuum & (sol.cont_lo - tol <= gamma) & (gamma <= sol.cont_hi + tol)
    ks, ts = np.nonzero(flat)
    i5 = ts // 4
    i3 = (ts // 2) % 2
    i2 = ts % 2
    positions: dict[str, list[np.ndarray]] = {
        "v2": [sol.p2[ks, i3, i2]],
        "v3": [sol.p3[ks, i3]],
        "v5": [sol.p5[ks, i5]],
        "v6": [sol.p6[ks]],
    }
    full_v2 = False
    for k, c5, c3 in zip(*np.nonzero(continuum)):
        positions["v3"].append(sol.p3[k, c3][None, :])
        positions["v5"].append(sol.p5[k, c5][None, :])
        positions["v6"].append(sol.p6[k][None, :])
        reach = math.dist(sol.p5[k, c5], p1)
        if reach <= tol and abs(gamma - lengths.b) <= tol:  # type: ignore[operator]
            full_v2 = True
        else:
            r = coincident_configuration(lengths, float(grid.theta[k]), (1 - 2 * int(c5), 1 - 2 * int(c3)), gamma)
            if r is not None:
                positions["v2"].append(np.array([r.positions["v2"]]))
    for root in _find_roots(grid, gamma, flat):
        r = configuration_at(lengths, root.theta, SIGN_TUPLES[root.sheet])
        if r is not None:
            for v in positions:
                positions[v].append(np.array([r.positions[v]]))

    centres = {"v2": ("v1", p1), "v6": ("v1", p1), "v3": ("v4", np.zeros(2)), "v5": ("v4", np.zeros(2))}
    result: dict[str, VertexWorkspace] = {}
    for v, chunks in positions.items():
        centre_name, centre = centres[v]
        pts = np.concatenate(chunks) if chunks else np.empty((0, 2))
        angles = np.arctan2(pts[:, 1] - centre[1], pts[:, 0] - centre[0])
        arcs = ((-math.pi, math.pi),) if v == "v2" and full_v2 else _angular_arcs(angles, gap)
        result[v] = VertexWorkspace(v, centre_name, arcs)
    return result


__all__ = [
    "ALLOWED_COUNTS",
    "K33_FRAME",
    "ComponentReport",
    "ConfigPoint",
    "DimensionFlag",
    "Method",
    "ParityCheck",
    "ParitySurvey",
    "PathCertificate",
    "VertexWorkspace",
    "component_parity_check",
    "generic_component_count",
    "k33_component_count",
    "k33_workspaces",
    "parity_survey",
    "random_feasible_k33",
]
