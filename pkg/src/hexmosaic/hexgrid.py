"""Planar hierarchical hexagonal grid with aperture-7 parent/child structure.

The grid is a family of flat-top hexagon lattices on a projected plane, one
lattice per resolution. Resolution k has edge length ``e0 * 7**(-k/2)`` and
is rotated ``k * atan(sqrt(3)/5)`` counterclockwise about the origin, so each
step subdivides a cell into seven cells at the next finer resolution.

With that rotation the coarse lattice centers form an exact index-7
sublattice of the fine lattice: the cell co-located with parent ``(q, r)``
is ``(3q + r, 2r - q)`` one resolution down. Parent/child navigation is
therefore exact, never a nearest-center guess.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import NamedTuple

from .errors import (
    HierarchyExhaustedError,
    IndexParseError,
    ResolutionRangeError,
    RootHasNoParentError,
)

SQRT3 = math.sqrt(3.0)
SQRT7 = math.sqrt(7.0)

# Counterclockwise rotation between consecutive resolutions (~19.106605 deg).
ROTATION_PER_LEVEL = math.atan2(SQRT3, 5.0)

# Axial neighbor offsets, counterclockwise, starting at the +q direction.
AXIAL_DIRECTIONS = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))

# Ring order for children(): the first entry is the child direction whose
# world angle is nearest the parent lattice's +x axis (it trails it by
# ~10.89 deg; every other child direction is at least 49 deg away), then
# counterclockwise. Verified against the angle rule in the test suite.
_CHILD_RING = ((1, -1), (1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1))

_INDEX_RE = re.compile(r"^r(\d+):(-?\d+):(-?\d+)$")


class ProjectedPoint(NamedTuple):
    """A point on the projected plane, in meters."""

    x: float
    y: float


class HexIndex(NamedTuple):
    """Canonical identity of one cell: equal iff all three fields are equal."""

    resolution: int
    q: int
    r: int


class HexCell(NamedTuple):
    """Geometry of one cell: center plus 6 vertices in counterclockwise order."""

    index: HexIndex
    center: ProjectedPoint
    vertices: tuple[ProjectedPoint, ...]
    edge_length: float


def format_index(h: HexIndex) -> str:
    """Render an index in the textual ``r{resolution}:{q}:{r}`` form."""
    return f"r{h.resolution}:{h.q}:{h.r}"


def parse_index(text: str) -> HexIndex:
    """Parse the textual index form; exact round-trip with format_index."""
    m = _INDEX_RE.match(text)
    if not m:
        raise IndexParseError(f"bad cell index {text!r}, expected r{{res}}:{{q}}:{{r}}")
    return HexIndex(int(m.group(1)), int(m.group(2)), int(m.group(3)))


def _axial_round(qf: float, rf: float) -> tuple[int, int]:
    """Round fractional axial coordinates to the nearest lattice cell."""
    sf = -qf - rf
    q, r, s = round(qf), round(rf), round(sf)
    dq, dr, ds = abs(q - qf), abs(r - rf), abs(s - sf)
    if dq > dr and dq > ds:
        q = -r - s
    elif dr > ds:
        r = -q - s
    return int(q), int(r)


@dataclass(frozen=True)
class HexGrid:
    """Grid configuration: root edge length and the finest usable resolution.

    All operations are pure functions of (config, arguments); the object
    holds no mutable state and is safe to share across threads.
    """

    e0: float = 65536.0
    max_resolution: int = 12

    def __post_init__(self) -> None:
        if not (math.isfinite(self.e0) and self.e0 > 0):
            raise ValueError(f"root edge length must be positive, got {self.e0}")
        if self.max_resolution < 0:
            raise ValueError("max_resolution must be >= 0")

    def _check_resolution(self, resolution: int) -> None:
        if not isinstance(resolution, int) or isinstance(resolution, bool):
            raise ResolutionRangeError(f"resolution must be an integer, got {resolution!r}")
        if not 0 <= resolution <= self.max_resolution:
            raise ResolutionRangeError(
                f"resolution {resolution} outside [0, {self.max_resolution}]"
            )

    def edge_length(self, resolution: int) -> float:
        """Edge length (= circumradius) of cells at a resolution, in meters."""
        self._check_resolution(resolution)
        return self.e0 * 7.0 ** (-resolution / 2.0)

    def _frame(self, resolution: int) -> tuple[float, float, float]:
        rot = resolution * ROTATION_PER_LEVEL
        return self.edge_length(resolution), math.cos(rot), math.sin(rot)

    def _center_xy(self, resolution: int, q: int, r: int) -> tuple[float, float]:
        e, cos_t, sin_t = self._frame(resolution)
        ux = e * 1.5 * q
        uy = e * SQRT3 * (r + 0.5 * q)
        return cos_t * ux - sin_t * uy, sin_t * ux + cos_t * uy

    def center(self, h: HexIndex) -> ProjectedPoint:
        """Center of a cell on the projected plane."""
        self._check_resolution(h.resolution)
        return ProjectedPoint(*self._center_xy(h.resolution, h.q, h.r))

    def cell_of_point(self, p: ProjectedPoint, resolution: int) -> HexIndex:
        """The cell whose hexagon contains p.

        Hexagons tile the plane as the Voronoi cells of their centers, so
        containment is nearest-center. Points equidistant from several
        centers (shared edges/vertices) resolve to the lexicographically
        smallest (q, r).
        """
        self._check_resolution(resolution)
        x, y = float(p[0]), float(p[1])
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ValueError(f"point must be finite, got ({x}, {y})")
        e, cos_t, sin_t = self._frame(resolution)
        ux = cos_t * x + sin_t * y
        uy = -sin_t * x + cos_t * y
        qf = (2.0 / 3.0) * ux / e
        rf = uy / (SQRT3 * e) - ux / (3.0 * e)
        q0, r0 = _axial_round(qf, rf)

        # Cube rounding can land one cell off near boundaries; refine over the
        # rounded cell and its neighbors, breaking near-ties lexicographically.
        candidates = [(q0, r0)] + [(q0 + dq, r0 + dr) for dq, dr in AXIAL_DIRECTIONS]
        dists = [
            math.hypot(x - cx, y - cy)
            for cx, cy in (self._center_xy(resolution, q, r) for q, r in candidates)
        ]
        d_min = min(dists)
        tol = 1e-9 * e
        q, r = min(c for c, d in zip(candidates, dists) if d <= d_min + tol)
        return HexIndex(resolution, q, r)

    def boundary(self, h: HexIndex) -> HexCell:
        """Center and the 6 vertices of a cell, counterclockwise."""
        self._check_resolution(h.resolution)
        e, _, _ = self._frame(h.resolution)
        cx, cy = self._center_xy(h.resolution, h.q, h.r)
        rot = h.resolution * ROTATION_PER_LEVEL
        verts = tuple(
            ProjectedPoint(
                cx + e * math.cos(rot + i * math.pi / 3.0),
                cy + e * math.sin(rot + i * math.pi / 3.0),
            )
            for i in range(6)
        )
        return HexCell(h, ProjectedPoint(cx, cy), verts, e)

    def children(self, h: HexIndex) -> list[HexIndex]:
        """The 7 cells one resolution finer: center child first, then its ring.

        The center child shares the parent's center exactly; the ring is its
        6 neighbors in the child lattice, counterclockwise starting from the
        direction aligned with the parent's +x axis.
        """
        self._check_resolution(h.resolution)
        if h.resolution >= self.max_resolution:
            raise HierarchyExhaustedError(
                f"no children beyond max resolution {self.max_resolution}"
            )
        k = h.resolution + 1
        cq, cr = 3 * h.q + h.r, 2 * h.r - h.q
        return [HexIndex(k, cq, cr)] + [
            HexIndex(k, cq + dq, cr + dr) for dq, dr in _CHILD_RING
        ]

    def parent(self, h: HexIndex) -> HexIndex:
        """The cell one resolution coarser whose hexagon holds h's center.

        Child centers sit at distance 0 or ~0.655 parent edge lengths from
        the nearest parent center, strictly inside its apothem, so the
        answer is never a boundary tie.
        """
        self._check_resolution(h.resolution)
        if h.resolution == 0:
            raise RootHasNoParentError("resolution-0 cells have no parent")
        return self.cell_of_point(self.center(h), h.resolution - 1)

    def cells_covering(
        self, bbox: tuple[ProjectedPoint, ProjectedPoint], resolution: int
    ) -> list[HexIndex]:
        """Every cell whose hexagon intersects the axis-aligned box.

        Touching counts as intersecting (within a 1e-9 m classification
        epsilon), so a degenerate zero-area box yields the cells containing
        the segment or point. Results are unique and sorted by (q, r).
        """
        self._check_resolution(resolution)
        (ax, ay), (bx, by) = bbox
        xmin, xmax = min(ax, bx), max(ax, bx)
        ymin, ymax = min(ay, by), max(ay, by)
        e, cos_t, sin_t = self._frame(resolution)

        # Candidate axial range: axial coords are linear in plane coords, so
        # extremes over the circumradius-inflated box occur at its corners.
        corners = (
            (xmin - e, ymin - e),
            (xmin - e, ymax + e),
            (xmax + e, ymin - e),
            (xmax + e, ymax + e),
        )
        qfs, rfs = [], []
        for x, y in corners:
            ux = cos_t * x + sin_t * y
            uy = -sin_t * x + cos_t * y
            qfs.append((2.0 / 3.0) * ux / e)
            rfs.append(uy / (SQRT3 * e) - ux / (3.0 * e))
        q_lo, q_hi = math.floor(min(qfs)) - 1, math.ceil(max(qfs)) + 1
        r_lo, r_hi = math.floor(min(rfs)) - 1, math.ceil(max(rfs)) + 1

        eps = 1e-9
        box_corners = ((xmin, ymin), (xmax, ymin), (xmax, ymax), (xmin, ymax))
        out = []
        for q in range(q_lo, q_hi + 1):
            for r in range(r_lo, r_hi + 1):
                verts = self.boundary(HexIndex(resolution, q, r)).vertices
                if _hex_box_intersect(verts, box_corners, xmin, ymin, xmax, ymax, eps):
                    out.append(HexIndex(resolution, q, r))
        return out


def _hex_box_intersect(
    verts: tuple[ProjectedPoint, ...],
    box_corners: tuple[tuple[float, float], ...],
    xmin: float,
    ymin: float,
    xmax: float,
    ymax: float,
    eps: float,
) -> bool:
    """Separating-axis test between a convex hexagon and an axis-aligned box."""
    hx = [v.x for v in verts]
    hy = [v.y for v in verts]
    if max(hx) < xmin - eps or min(hx) > xmax + eps:
        return False
    if max(hy) < ymin - eps or min(hy) > ymax + eps:
        return False
    for i in range(6):
        a = verts[i]
        b = verts[(i + 1) % 6]
        nx, ny = b.y - a.y, a.x - b.x
        scale = math.hypot(nx, ny)
        h_proj = [nx * v.x + ny * v.y for v in verts]
        b_proj = [nx * cx + ny * cy for cx, cy in box_corners]
        if max(h_proj) < min(b_proj) - eps * scale:
            return False
        if max(b_proj) < min(h_proj) - eps * scale:
            return False
    return True
