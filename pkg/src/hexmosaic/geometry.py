"""Polygon primitives: signed areas, point-in-polygon, convex-window clipping.

Everything here feeds the area weights of the aggregation stage. The clip
window is always a regular hexagon (convex), so successive half-plane
clipping is sufficient; concave subjects can come out with degenerate
zero-width bridges, which is fine because only the shoelace area of the
result is consumed downstream.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

from .hexgrid import HexCell, ProjectedPoint

log = logging.getLogger(__name__)

# Point-classification epsilon, in meters. Projected magnitudes stay below
# ~2e7 m, so doubles hold ~1e-9 m of slack.
EPSILON_M = 1e-9


@dataclass(frozen=True)
class Ring:
    """An ordered, implicitly closed loop of at least 3 distinct points."""

    points: tuple[ProjectedPoint, ...]

    def __post_init__(self) -> None:
        pts = tuple(ProjectedPoint(float(p[0]), float(p[1])) for p in self.points)
        if len(pts) < 3:
            raise ValueError(f"ring needs at least 3 points, got {len(pts)}")
        for p in pts:
            if not (math.isfinite(p.x) and math.isfinite(p.y)):
                raise ValueError(f"ring has non-finite point {p}")
        for a, b in zip(pts, pts[1:] + pts[:1]):
            if a == b:
                raise ValueError(f"ring has consecutive identical points at {a}")
        object.__setattr__(self, "points", pts)


@dataclass(frozen=True)
class PolygonGeometry:
    """One outer ring and zero or more hole rings."""

    outer: Ring
    holes: tuple[Ring, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "holes", tuple(self.holes))
        outer_area = abs(ring_area(self.outer))
        if outer_area <= 0.0:
            raise ValueError("outer ring has zero area")
        for hole in self.holes:
            if abs(ring_area(hole)) >= outer_area:
                raise ValueError("hole area exceeds outer ring area")


def ring_area(ring: Ring | list[ProjectedPoint] | tuple[ProjectedPoint, ...]) -> float:
    """Shoelace signed area of a ring; counterclockwise is positive."""
    pts = ring.points if isinstance(ring, Ring) else ring
    n = len(pts)
    if n < 3:
        return 0.0
    acc = 0.0
    for i in range(n):
        x0, y0 = pts[i]
        x1, y1 = pts[(i + 1) % n]
        acc += x0 * y1 - x1 * y0
    return 0.5 * acc


def polygon_area(poly: PolygonGeometry) -> float:
    """Outer area minus hole areas, clamped at zero."""
    area = abs(ring_area(poly.outer)) - sum(abs(ring_area(h)) for h in poly.holes)
    if area < 0.0:
        log.warning("polygon holes exceed outer area by %g m^2; clamping to 0", -area)
        return 0.0
    return area


def point_in_ring(p: ProjectedPoint, ring: Ring, eps: float = EPSILON_M) -> bool:
    """Ray-casting containment test; points within eps of an edge count as inside."""
    pts = ring.points if isinstance(ring, Ring) else ring
    x, y = p
    n = len(pts)
    inside = False
    for i in range(n):
        x0, y0 = pts[i]
        x1, y1 = pts[(i + 1) % n]
        # on-segment check
        dx, dy = x1 - x0, y1 - y0
        seg_len2 = dx * dx + dy * dy
        if seg_len2 > 0.0:
            t = ((x - x0) * dx + (y - y0) * dy) / seg_len2
            if 0.0 <= t <= 1.0:
                px, py = x0 + t * dx, y0 + t * dy
                if math.hypot(x - px, y - py) <= eps:
                    return True
        if (y0 > y) != (y1 > y):
            x_cross = x0 + (y - y0) * dx / dy
            if x < x_cross:
                inside = not inside
    return inside


def clip_ring_to_hex(
    ring: Ring | list[ProjectedPoint] | tuple[ProjectedPoint, ...], cell: HexCell
) -> list[ProjectedPoint]:
    """Clip a ring against a hexagonal cell by its 6 half-planes.

    Returns the clipped loop's points (possibly with degenerate coincident
    edges), or an empty list when the ring misses the hexagon entirely.
    The hexagon's vertices are counterclockwise, so the interior lies to
    the left of each directed edge.
    """
    pts = list(ring.points if isinstance(ring, Ring) else ring)
    verts = cell.vertices
    eps = EPSILON_M
    for i in range(6):
        if not pts:
            return []
        ax, ay = verts[i]
        bx, by = verts[(i + 1) % 6]
        ex, ey = bx - ax, by - ay
        norm = math.hypot(ex, ey)
        out: list[ProjectedPoint] = []
        prev = pts[-1]
        prev_side = ex * (prev.y - ay) - ey * (prev.x - ax)
        prev_in = prev_side >= -eps * norm
        for cur in pts:
            cur_side = ex * (cur.y - ay) - ey * (cur.x - ax)
            cur_in = cur_side >= -eps * norm
            if cur_in:
                if not prev_in:
                    out.append(_edge_intersection(prev, cur, prev_side, cur_side))
                out.append(cur)
            elif prev_in:
                out.append(_edge_intersection(prev, cur, prev_side, cur_side))
            prev, prev_side, prev_in = cur, cur_side, cur_in
        pts = out
    return pts if len(pts) >= 3 else []


def _edge_intersection(
    p: ProjectedPoint, q: ProjectedPoint, side_p: float, side_q: float
) -> ProjectedPoint:
    """Point where segment p-q crosses the clip line, by side interpolation."""
    t = side_p / (side_p - side_q)
    return ProjectedPoint(p.x + t * (q.x - p.x), p.y + t * (q.y - p.y))


def intersection_area(poly: PolygonGeometry, cell: HexCell) -> float:
    """Area of polygon-and-hexagon overlap, holes subtracted, never negative."""
    area = abs(ring_area(clip_ring_to_hex(poly.outer, cell)))
    for hole in poly.holes:
        area -= abs(ring_area(clip_ring_to_hex(hole, cell)))
    return max(0.0, area)
