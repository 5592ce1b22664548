"""SVG figures of workspaces and pinned realizations, drawn with matplotlib.

Figures are built on a bare `Figure` (no pyplot state), one point per
pixel, `scale` points per unit length and a fixed margin. Group ids name
what they hold (`carrier-W3`, `arc-W6-0`, `edge-4`, `vertex-v2`,
`label-v2`, `pinned-edge`) and SVG output is byte-stable: no date, fixed
hash salt, text kept as text.
"""

from __future__ import annotations

import io
import math

import matplotlib
import numpy as np
from matplotlib.axes import Axes
from matplotlib.figure import Figure
from matplotlib.patches import Arc, Circle

from .graph_core import Realization, WeightedGraph
from .intervals_arcs import CircleArcSet

DEFAULT_SCALE = 40
MARGIN = 20.0
POINTS_PER_INCH = 72.0
CIRCLE_COLOR = "#999999"
ARC_COLOR = "#c0392b"
EDGE_COLOR = "#2c3e50"
PIN_COLOR = "#2980b9"
SVG_RC = {
    "svg.hashsalt": "linkspace",
    "svg.fonttype": "none",
    "font.family": "sans-serif",
    "font.size": 9.0,
}


def _figure(points: np.ndarray, scale: float) -> tuple[Figure, Axes]:
    # Axes fill the figure; limits are the bounding box padded by MARGIN pixels.
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if not len(pts):
        pts = np.zeros((1, 2))
    pad = MARGIN / float(scale)
    lo = pts.min(axis=0) - pad
    hi = pts.max(axis=0) + pad
    width, height = (hi - lo) * float(scale) / POINTS_PER_INCH
    fig = Figure(figsize=(width, height), dpi=POINTS_PER_INCH)
    ax = fig.add_axes((0.0, 0.0, 1.0, 1.0))
    ax.set_xlim(lo[0], hi[0])
    ax.set_ylim(lo[1], hi[1])
    ax.set_aspect("equal")
    ax.set_axis_off()
    return fig, ax


def _vertex(ax: Axes, name: str, xy: tuple[float, float]) -> None:
    ax.plot([xy[0]], [xy[1]], "o", color=EDGE_COLOR, markersize=6, gid=f"vertex-{name}")
    ax.annotate(name, xy, xytext=(6, 6), textcoords="offset points", gid=f"label-{name}")


def _to_svg(fig: Figure, title: str | None) -> str:
    metadata: dict[str, str | None] = {"Date": None}
    if title:
        metadata["Title"] = title
    buf = io.StringIO()
    with matplotlib.rc_context(SVG_RC):
        fig.savefig(buf, format="svg", metadata=metadata)
    return buf.getvalue()


def render_workspaces(
    w3: CircleArcSet,
    w6: CircleArcSet,
    alpha: float,
    scale: float = DEFAULT_SCALE,
    *,
    title: str | None = None,
) -> str:
    """Both carrier circles dashed, the workspace arcs stroked, v4v1 on the x-axis."""

    corners = [(0.0, 0.0), (alpha, 0.0)]
    for ws in (w3, w6):
        corners += [(ws.center_x - ws.radius, -ws.radius), (ws.center_x + ws.radius, ws.radius)]
    with matplotlib.rc_context(SVG_RC):
        fig, ax = _figure(np.array(corners), scale)
        for name, ws in (("W3", w3), ("W6", w6)):
            ax.add_patch(
                Circle(
                    (ws.center_x, 0.0),
                    ws.radius,
                    fill=False,
                    linestyle="--",
                    linewidth=1.0,
                    edgecolor=CIRCLE_COLOR,
                    gid=f"carrier-{name}",
                )
            )
        for name, ws in (("W3", w3), ("W6", w6)):
            for i, (start, stop) in enumerate(ws.arcs()):
                gid = f"arc-{name}-{i}"
                if math.isclose(start, stop):
                    x, y = ws.point_at(start)
                    ax.plot([x], [y], "o", color=ARC_COLOR, markersize=5, gid=gid)
                    continue
                ax.add_patch(
                    Arc(
                        (ws.center_x, 0.0),
                        2.0 * ws.radius,
                        2.0 * ws.radius,
                        theta1=math.degrees(start),
                        theta2=math.degrees(stop),
                        linewidth=3.0,
                        edgecolor=ARC_COLOR,
                        gid=gid,
                    )
                )
        ax.plot([0.0, alpha], [0.0, 0.0], color=PIN_COLOR, linewidth=3.0, gid="pinned-edge")
        for name, x in (("v4", 0.0), ("v1", alpha)):
            _vertex(ax, name, (x, 0.0))
    return _to_svg(fig, title)


def render_realization(
    g: WeightedGraph,
    realization: Realization,
    scale: float = DEFAULT_SCALE,
    title: str | None = None,
) -> str:
    """Edges as segments and vertices as labelled dots, in vertex order."""

    pos = realization.positions
    with matplotlib.rc_context(SVG_RC):
        fig, ax = _figure(realization.as_array(g.vertices), scale)
        for i, e in enumerate(g.edges):
            (x1, y1), (x2, y2) = pos[e.u], pos[e.v]
            ax.plot([x1, x2], [y1, y2], color=EDGE_COLOR, linewidth=2.0, gid=f"edge-{i}")
        for v in g.vertices:
            _vertex(ax, v, pos[v])
    return _to_svg(fig, title)


__all__ = ["DEFAULT_SCALE", "render_realization", "render_workspaces"]
