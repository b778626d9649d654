import math

import pytest

from hexmosaic.geometry import PolygonGeometry, Ring
from hexmosaic.hexgrid import HexGrid, ProjectedPoint
from hexmosaic.ingest import Dataset, Feature, VariableSpec


@pytest.fixture
def grid():
    return HexGrid()


@pytest.fixture
def small_grid():
    """A grid whose resolution-1..2 cells are a few hundred meters across."""
    return HexGrid(e0=1000.0, max_resolution=8)


def rect(x0, y0, x1, y1) -> PolygonGeometry:
    """Axis-aligned rectangle as a counterclockwise polygon."""
    return PolygonGeometry(
        Ring(
            (
                ProjectedPoint(x0, y0),
                ProjectedPoint(x1, y0),
                ProjectedPoint(x1, y1),
                ProjectedPoint(x0, y1),
            )
        )
    )


def make_dataset(features, variables, projection_id="web-mercator") -> Dataset:
    """Build a Dataset straight from projected-plane geometry.

    ``features`` is a list of (id, parts, attributes); parts may be a single
    PolygonGeometry or a list of them.
    """
    built = []
    for fid, parts, attrs in features:
        if isinstance(parts, PolygonGeometry):
            parts = (parts,)
        built.append(Feature(id=fid, parts=tuple(parts), attributes=dict(attrs)))
    xs0 = [f.bbox[0].x for f in built]
    ys0 = [f.bbox[0].y for f in built]
    xs1 = [f.bbox[1].x for f in built]
    ys1 = [f.bbox[1].y for f in built]
    bbox = (ProjectedPoint(min(xs0), min(ys0)), ProjectedPoint(max(xs1), max(ys1)))
    return Dataset(
        features=tuple(built),
        variables=tuple(variables),
        projection_id=projection_id,
        bbox=bbox,
        diagnostics={},
    )


def var(name, lo, hi, kind="intensive", **kw) -> VariableSpec:
    return VariableSpec(name=name, kind=kind, domain_min=lo, domain_max=hi, **kw)


def hexagon_area(edge: float) -> float:
    return 1.5 * math.sqrt(3.0) * edge * edge
