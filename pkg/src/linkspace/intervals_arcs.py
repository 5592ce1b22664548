"""
Interval sets and axis-symmetric circle arcs.

Feasible values of an added edge form a finite union of closed intervals
(`IntervalSet`). Workspaces of pinned vertices are subsets of circles centred
on the x-axis that are symmetric under the x-axis reflection
(`CircleArcSet`); the distances between two such workspaces form one or two
intervals, computed exactly from finitely many extremal candidates.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from typing import Literal, TypeAlias

import numpy as np

from .utils.errors import ArcSetError

ArcKind: TypeAlias = Literal["empty", "full", "arc", "pair"]
Interval: TypeAlias = tuple[float, float]

SPLIT_RTOL = 1e-9
_ANGLE_TOL = 1e-12


def _fmt(x: float) -> str:
    return f"{x:.10g}"


@dataclass(frozen=True)
class IntervalSet:
    """Sorted, pairwise-disjoint closed intervals of nonnegative reals.

    Overlapping or touching inputs are merged on construction. Negative
    lower ends are clamped to 0.
    """

    intervals: tuple[Interval, ...] = ()

    def __post_init__(self) -> None:
        cleaned: list[list[float]] = []
        for lo, hi in self.intervals:
            lo, hi = float(lo), float(hi)
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise ValueError(f"Interval endpoints must be finite, got [{lo}, {hi}]")
            if lo > hi:
                raise ValueError(f"Interval lower end exceeds upper end: [{lo}, {hi}]")
            if hi < 0:
                raise ValueError(f"Interval lies below zero: [{lo}, {hi}]")
            cleaned.append([max(lo, 0.0), hi])
        cleaned.sort()
        merged: list[list[float]] = []
        for lo, hi in cleaned:
            if merged and lo <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        object.__setattr__(self, "intervals", tuple((lo, hi) for lo, hi in merged))

    @classmethod
    def of(cls, *pairs: Interval) -> IntervalSet:
        return cls(tuple(pairs))

    @classmethod
    def empty(cls) -> IntervalSet:
        return cls(())

    @classmethod
    def point(cls, x: float) -> IntervalSet:
        return cls(((x, x),))

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.intervals)

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    @property
    def lo(self) -> float:
        return self.intervals[0][0]

    @property
    def hi(self) -> float:
        return self.intervals[-1][1]

    @property
    def centers(self) -> list[float]:
        return [(lo + hi) / 2 for lo, hi in self.intervals]

    @property
    def widths(self) -> list[float]:
        return [hi - lo for lo, hi in self.intervals]

    @property
    def measure(self) -> float:
        return math.fsum(self.widths)

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return any(lo - tol <= x <= hi + tol for lo, hi in self.intervals)

    def distance_to(self, x: float) -> float:
        """0 inside the set, else the gap to the nearest interval."""
        if self.is_empty:
            return math.inf
        return min(max(lo - x, x - hi, 0.0) for lo, hi in self.intervals)

    def intersect(self, other: IntervalSet) -> IntervalSet:
        out: list[Interval] = []
        i = j = 0
        a, b = self.intervals, other.intervals
        while i < len(a) and j < len(b):
            lo = max(a[i][0], b[j][0])
            hi = min(a[i][1], b[j][1])
            if lo <= hi:
                out.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        return IntervalSet(tuple(out))

    def union(self, other: IntervalSet) -> IntervalSet:
        return IntervalSet(self.intervals + other.intervals)

    def merge_gaps(self, gap: float) -> IntervalSet:
        """Merge neighbours separated by less than `gap`."""
        if not self.intervals:
            return self
        merged = [list(self.intervals[0])]
        for lo, hi in self.intervals[1:]:
            if lo - merged[-1][1] < gap:
                merged[-1][1] = hi
            else:
                merged.append([lo, hi])
        return IntervalSet(tuple((lo, hi) for lo, hi in merged))

    def format(self) -> str:
        if not self.intervals:
            return "∅"
        return " ∪ ".join(f"[{_fmt(lo)}, {_fmt(hi)}]" for lo, hi in self.intervals)

    def to_json(self) -> dict[str, list[list[float]]]:
        return {"intervals": [[lo, hi] for lo, hi in self.intervals]}

    def to_csv(self) -> str:
        rows = ["lo,hi"] + [f"{lo!r},{hi!r}" for lo, hi in self.intervals]
        return "\n".join(rows) + "\n"

    def __str__(self) -> str:
        return self.format()


def interval_intersect(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    """Set-theoretic intersection, normalized."""

    return a.intersect(b)


def interval_union(sets: Iterable[IntervalSet]) -> IntervalSet:
    pieces: list[Interval] = []
    for s in sets:
        pieces.extend(s.intervals)
    return IntervalSet(tuple(pieces))


@dataclass(frozen=True)
class CircleArcSet:
    """An x-axis-symmetric subset of the circle with centre (center_x, 0).

    The set is {angle ±φ : φ in [phi_lo, phi_hi]} with 0 ≤ phi_lo ≤ phi_hi ≤ π.
    phi_lo = 0 and phi_hi = π is the full circle; exactly one of them at its
    bound is a single arc symmetric about angle 0 or π; neither is a pair of
    arcs exchanged by the reflection. Zero-width ranges are points.
    """

    center_x: float
    radius: float
    phi_lo: float = 0.0
    phi_hi: float = math.pi
    empty: bool = False

    def __post_init__(self) -> None:
        if self.radius < 0:
            raise ValueError(f"Circle radius must be nonnegative, got {self.radius}")
        if not self.empty and not 0.0 <= self.phi_lo <= self.phi_hi <= math.pi:
            raise ValueError(
                f"Angular range must satisfy 0 <= phi_lo <= phi_hi <= pi, "
                f"got [{self.phi_lo}, {self.phi_hi}]"
            )

    @classmethod
    def full(cls, center_x: float, radius: float) -> CircleArcSet:
        return cls(center_x, radius)

    @classmethod
    def nothing(cls, center_x: float, radius: float) -> CircleArcSet:
        return cls(center_x, radius, 0.0, 0.0, empty=True)

    @property
    def kind(self) -> ArcKind:
        if self.empty:
            return "empty"
        at_zero = self.phi_lo <= 0.0
        at_pi = self.phi_hi >= math.pi
        if at_zero and at_pi:
            return "full"
        if at_zero or at_pi:
            return "arc"
        return "pair"

    @property
    def arc_center(self) -> float | None:
        """Angle (0 or π) the single symmetric arc is centred on."""
        if self.kind != "arc":
            return None
        return 0.0 if self.phi_lo <= 0.0 else math.pi

    @property
    def half_width(self) -> float | None:
        if self.kind != "arc":
            return None
        return self.phi_hi if self.phi_lo <= 0.0 else math.pi - self.phi_lo

    @property
    def upper(self) -> tuple[float, float]:
        """Angular range of the part on or above the x-axis."""
        return (self.phi_lo, self.phi_hi)

    @property
    def lower(self) -> tuple[float, float]:
        return (-self.phi_hi, -self.phi_lo)

    def arcs(self) -> list[tuple[float, float]]:
        """Connected pieces as counter-clockwise (start, stop) angles, stop ≥ start."""
        match self.kind:
            case "empty":
                return []
            case "full":
                return [(-math.pi, math.pi)]
            case "arc" if self.phi_lo <= 0.0:
                return [(-self.phi_hi, self.phi_hi)]
            case "arc":
                return [(self.phi_lo, 2 * math.pi - self.phi_lo)]
            case _:
                return [(-self.phi_hi, -self.phi_lo), (self.phi_lo, self.phi_hi)]

    def point_at(self, angle: float) -> tuple[float, float]:
        return (
            self.center_x + self.radius * math.cos(angle),
            self.radius * math.sin(angle),
        )

    def sample(self, per_arc: int) -> np.ndarray:
        """Evenly spaced points along every piece, endpoints included."""
        chunks = []
        for start, stop in self.arcs():
            t = np.linspace(start, stop, per_arc)
            chunks.append(
                np.column_stack(
                    (self.center_x + self.radius * np.cos(t), self.radius * np.sin(t))
                )
            )
        if not chunks:
            return np.empty((0, 2))
        return np.vstack(chunks)

    def contains(self, point: tuple[float, float], tol: float = 1e-9) -> bool:
        if self.empty:
            return False
        dx, dy = point[0] - self.center_x, point[1]
        if abs(math.hypot(dx, dy) - self.radius) > tol:
            return False
        if self.radius <= tol:
            return True
        phi = abs(math.atan2(dy, dx))
        slack = tol / self.radius
        return self.phi_lo - slack <= phi <= self.phi_hi + slack

    def reflected(self) -> CircleArcSet:
        """The x-axis reflection, which maps the set onto itself."""
        return self


@dataclass(frozen=True)
class StageBounds:
    """Extremal distances and doubled maxima recorded by a stage.

    m, N are the global min and max distance between two workspaces; M is the
    max over same-side pairs and n the min over opposite-side pairs. mu1 and
    mu2 are twice the largest length on each side of the α-stage cycles.
    """

    m: float | None = None
    M: float | None = None
    n: float | None = None
    N: float | None = None
    mu1: float | None = None
    mu2: float | None = None
    split: bool = False

    def to_json(self) -> dict[str, float | bool | None]:
        return {
            "m": self.m,
            "M": self.M,
            "n": self.n,
            "N": self.N,
            "mu1": self.mu1,
            "mu2": self.mu2,
            "split": self.split,
        }


def circle_annulus_arcs(
    circle_center_x: float,
    circle_radius: float,
    annulus_center_x: float,
    r_min: float,
    r_max: float,
) -> CircleArcSet:
    """Points of a circle whose distance to (annulus_center_x, 0) lies in [r_min, r_max].

    The squared distance is affine in cos φ, so the answer is a range of
    cos φ clipped to [-1, 1]; tangencies within 1e-12 of the squared scale
    collapse to single points instead of vanishing.
    """
    if circle_radius < 0 or r_min < 0 or r_max < 0:
        raise ValueError("Radii must be nonnegative")
    if r_min > r_max:
        raise ValueError(f"r_min {r_min} exceeds r_max {r_max}")

    delta = circle_center_x - annulus_center_x
    r = circle_radius
    scale = 1.0 + abs(delta) + r + r_max
    tol2 = 1e-12 * scale * scale
    base = delta * delta + r * r
    k = 2.0 * r * delta

    if k == 0.0:
        # Concentric or zero radius: one distance for the whole circle.
        if r_min * r_min - tol2 <= base <= r_max * r_max + tol2:
            return CircleArcSet.full(circle_center_x, r)
        return CircleArcSet.nothing(circle_center_x, r)

    c1 = (r_min * r_min - base) / k
    c2 = (r_max * r_max - base) / k
    u_lo, u_hi = min(c1, c2), max(c1, c2)
    tol_c = tol2 / abs(k)
    if u_lo > 1.0 + tol_c or u_hi < -1.0 - tol_c:
        return CircleArcSet.nothing(circle_center_x, r)
    u_lo = min(max(u_lo, -1.0), 1.0)
    u_hi = min(max(u_hi, -1.0), 1.0)
    return CircleArcSet(circle_center_x, r, math.acos(u_hi), math.acos(u_lo))


def _point(center_x: float, radius: float, angle: float) -> tuple[float, float]:
    return (center_x + radius * math.cos(angle), radius * math.sin(angle))


def _within(angle: float, lo: float, hi: float) -> bool:
    for shift in (0.0, 2 * math.pi, -2 * math.pi):
        a = angle + shift
        if lo - _ANGLE_TOL <= a <= hi + _ANGLE_TOL:
            return True
    return False


def _facing_angles(
    w: tuple[float, float], center_x: float
) -> tuple[float, ...]:
    # Nearest and farthest points of a circle about (center_x, 0) as seen from w.
    dx, dy = w[0] - center_x, w[1]
    if dx == 0.0 and dy == 0.0:
        return ()
    near = math.atan2(dy, dx)
    far = near - math.pi if near > 0 else near + math.pi
    return (near, far)


def _circle_intersections(
    c1: float, r1: float, c2: float, r2: float
) -> list[tuple[float, float]]:
    # Intersection points of two circles centred on the x-axis.
    # Near-concentric circles have no isolated intersection points.
    if abs(c2 - c1) <= 1e-12 * max(1.0, r1, r2, abs(c1), abs(c2)):
        return []
    x = (r1 * r1 - r2 * r2 + c2 * c2 - c1 * c1) / (2.0 * (c2 - c1))
    y2 = r1 * r1 - (x - c1) ** 2
    if y2 < -1e-12 * (1.0 + r1 + r2 + abs(c2 - c1)) ** 2:
        return []
    y = math.sqrt(max(y2, 0.0))
    return [(x, y), (x, -y)]


def _range_extrema(
    a: CircleArcSet,
    a_range: tuple[float, float],
    b: CircleArcSet,
    b_range: tuple[float, float],
) -> tuple[float, float]:
    # Min and max of d(w, w') for w on arc a_range of a and w' on arc b_range of b.
    # Interior critical points are either on the x-axis (range endpoints) or
    # circle intersections; edge critical points face the other centre.
    candidates: list[float] = []

    for phi in a_range:
        w = _point(a.center_x, a.radius, phi)
        for psi in b_range:
            candidates.append(math.dist(w, _point(b.center_x, b.radius, psi)))
        for psi in _facing_angles(w, b.center_x):
            if _within(psi, *b_range):
                candidates.append(math.dist(w, _point(b.center_x, b.radius, psi)))

    for psi in b_range:
        w = _point(b.center_x, b.radius, psi)
        for phi in _facing_angles(w, a.center_x):
            if _within(phi, *a_range):
                candidates.append(math.dist(w, _point(a.center_x, a.radius, phi)))

    for x, y in _circle_intersections(a.center_x, a.radius, b.center_x, b.radius):
        phi = math.atan2(y, x - a.center_x)
        psi = math.atan2(y, x - b.center_x)
        if _within(phi, *a_range) and _within(psi, *b_range):
            candidates.append(0.0)

    return min(candidates), max(candidates)


def arc_distance_set(a: CircleArcSet, b: CircleArcSet) -> tuple[IntervalSet, StageBounds]:
    """Distances {d(w, w') : w in a, w' in b} as at most two intervals.

    Same-side pairs give an interval [m, M] and opposite-side pairs an
    interval [n, N'] with n ≥ m and N' ≥ M (reflecting one point only moves
    it away). The result splits in two exactly when n > M beyond a 1e-9
    relative tolerance, which requires both sets to be arc pairs.

    Raises:
        ArcSetError: either set is empty.
    """
    if a.empty or b.empty:
        raise ArcSetError("arc_distance_set needs two non-empty arc sets")

    same_lo, same_hi = _range_extrema(a, a.upper, b, b.upper)
    cross_lo, cross_hi = _range_extrema(a, a.upper, b, b.lower)
    m = min(same_lo, cross_lo)
    big_n = max(same_hi, cross_hi)
    split = cross_lo - same_hi > SPLIT_RTOL * max(1.0, big_n)
    if split:
        values = IntervalSet.of((m, same_hi), (cross_lo, big_n))
    else:
        values = IntervalSet.of((m, big_n))
    bounds = StageBounds(m=m, M=same_hi, n=cross_lo, N=big_n, split=split)
    return values, bounds


__all__ = [
    "SPLIT_RTOL",
    "ArcKind",
    "CircleArcSet",
    "Interval",
    "IntervalSet",
    "StageBounds",
    "arc_distance_set",
    "circle_annulus_arcs",
    "interval_intersect",
    "interval_union",
]
