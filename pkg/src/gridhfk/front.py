"""Legendrian front of a grid diagram, rendered to SVG with matplotlib.

The grid projection is tilted 45 degrees clockwise: NW and SE corners become
smooth quarter circles, NE and SW corners become cusps.  In the front the
strand of smaller slope passes in front, so the strands coming from vertical
grid segments are drawn with a gap at every crossing.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .grid import (  # noqa: E402
    GridDiagram,
    classical_invariants,
    corner_type,
    crossings,
    trace_components,
)

CORNER_RADIUS = 0.3
GAP = 0.18
_S = math.sqrt(0.5)


def _tilt(p: tuple[float, float]) -> tuple[float, float]:
    x, y = p
    return (_S * (x + y), _S * (y - x))


@dataclass(frozen=True)
class FrontModel:
    """Geometry of the front before drawing, in untilted grid coordinates."""

    paths: tuple[tuple[int, tuple[tuple[float, float], ...]], ...]  # (component, polyline)
    cusps: tuple[tuple[int, tuple[float, float], str], ...]  # (component, tip, 'left'/'right')
    crossings: tuple[tuple[float, float], ...]


def _corner_curve(c, d1, d2, kind: str, r: float, steps: int = 12):
    """Points replacing the corner at ``c`` between unit directions d1, d2."""
    p1 = (c[0] + r * d1[0], c[1] + r * d1[1])
    p2 = (c[0] + r * d2[0], c[1] + r * d2[1])
    if kind == "smooth":
        centre = (c[0] + r * (d1[0] + d2[0]), c[1] + r * (d1[1] + d2[1]))
        a1 = math.atan2(p1[1] - centre[1], p1[0] - centre[0])
        a2 = math.atan2(p2[1] - centre[1], p2[0] - centre[0])
        da = (a2 - a1 + math.pi) % (2 * math.pi) - math.pi
        return [
            (centre[0] + r * math.cos(a1 + da * k / steps), centre[1] + r * math.sin(a1 + da * k / steps))
            for k in range(steps + 1)
        ]
    # cusp: both branches arrive tangent to the front's horizontal axis
    h = (d1[0] + d2[0], d1[1] + d2[1])
    hn = math.hypot(*h)
    h = (h[0] / hn, h[1] / hn)
    q = (c[0] + 0.5 * r * h[0], c[1] + 0.5 * r * h[1])

    def bez(a, b, ctrl):
        return [
            (
                (1 - t) ** 2 * a[0] + 2 * (1 - t) * t * ctrl[0] + t * t * b[0],
                (1 - t) ** 2 * a[1] + 2 * (1 - t) * t * ctrl[1] + t * t * b[1],
            )
            for t in (k / steps for k in range(steps + 1))
        ]

    return bez(p1, c, q) + bez(c, p2, q)[1:]


def front_model(G: GridDiagram) -> FrontModel:
    P = trace_components(G)
    xs = crossings(G, P)
    cross_at_col: dict[int, list[float]] = {}
    for x in xs:
        cross_at_col.setdefault(x.col, []).append(x.row + 0.5)
    paths = []
    cusps = []
    for comp, cols in enumerate(P.columns):
        # corners in order: X(c) -> O(c) vertically -> X in that row horizontally
        corners = []
        c = cols[0]
        while True:
            corners.append(("X", c, (c + 0.5, G.x_rows[c] + 0.5)))
            corners.append(("O", c, (c + 0.5, G.o_rows[c] + 0.5)))
            c = G.x_cols[G.o_rows[c]]
            if c == cols[0]:
                break
        m = len(corners)
        curves = []
        for k, (kind, col, pt) in enumerate(corners):
            prev_pt = corners[k - 1][2]
            next_pt = corners[(k + 1) % m][2]
            d1 = _unit(prev_pt, pt)
            d2 = _unit(next_pt, pt)
            ct = corner_type(G, kind, col)
            shape = "cusp" if ct in ("NE", "SW") else "smooth"
            curves.append(_corner_curve(pt, d1, d2, shape, CORNER_RADIUS))
            if shape == "cusp":
                cusps.append((comp, pt, "right" if ct == "NE" else "left"))
        # straight pieces between consecutive corner curves, with gaps on verticals
        for k in range(m):
            start = curves[k][-1]
            end = curves[(k + 1) % m][0]
            pieces = [[start, end]]
            if corners[k][0] == "X":  # X -> O is a vertical segment
                col = corners[k][1]
                for y in sorted(cross_at_col.get(col, []), key=lambda y: (y - start[1]) * (end[1] - start[1])):
                    last = pieces.pop()
                    a, b = last
                    sgn = 1 if b[1] > a[1] else -1
                    pieces.append([a, (a[0], y - sgn * GAP)])
                    pieces.append([(a[0], y + sgn * GAP), b])
            paths.append((comp, tuple(curves[k])))
            for piece in pieces:
                paths.append((comp, tuple(piece)))
    return FrontModel(
        tuple(paths), tuple(cusps), tuple((x.col + 0.5, x.row + 0.5) for x in xs)
    )


def _unit(a, b):
    dx, dy = a[0] - b[0], a[1] - b[1]
    d = math.hypot(dx, dy)
    return (dx / d, dy / d)


def render_front(G: GridDiagram) -> str:
    """Deterministic SVG document of the front."""
    model = front_model(G)
    inv = classical_invariants(G)
    colors = plt.get_cmap("tab10").colors
    with plt.rc_context({"svg.hashsalt": "gridhfk-front", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(6, 4))
        for comp, pts in model.paths:
            tx, ty = zip(*(_tilt(p) for p in pts))
            ax.plot(tx, ty, color=colors[comp % len(colors)], linewidth=1.6, solid_capstyle="butt")
        for i, (comp, tip, side) in enumerate(model.cusps):
            cx, cy = _tilt(tip)
            ax.plot([cx], [cy], marker=".", markersize=2, color=colors[comp % len(colors)], gid=f"cusp-{i}-{side}")
        for i in range(inv.components):
            label = f"K{i + 1}: tb={inv.tb[i]}, rot={inv.rot[i]}"
            ax.plot([], [], color=colors[i % len(colors)], label=label)
        ax.legend(loc="upper left", bbox_to_anchor=(1.0, 1.0), fontsize=8, frameon=False)
        ax.set_aspect("equal")
        ax.axis("off")
        buf = io.StringIO()
        fig.savefig(buf, format="svg", metadata={"Date": None}, bbox_inches="tight")
        plt.close(fig)
    return buf.getvalue()
