"""Independent oracles for the test suite.

Everything here deliberately avoids the library's own geometry path:
point containment comes from shapely, areas from pixel counting, so the
production clipping/weighting code is checked against a different method.
"""
from __future__ import annotations

import numpy as np
import shapely

from shapely.geometry import Polygon


def shapely_polygon(poly) -> Polygon:
    """Convert a PolygonGeometry to a shapely Polygon."""
    return Polygon(
        [(p.x, p.y) for p in poly.outer.points],
        [[(p.x, p.y) for p in hole.points] for hole in poly.holes],
    )


def pixel_grid(xmin, ymin, xmax, ymax, n):
    """Pixel-center sample grid over a box; returns flat x, y arrays and pixel area."""
    xs = xmin + (np.arange(n) + 0.5) * (xmax - xmin) / n
    ys = ymin + (np.arange(n) + 0.5) * (ymax - ymin) / n
    gx, gy = np.meshgrid(xs, ys)
    pixel_area = (xmax - xmin) * (ymax - ymin) / (n * n)
    return gx.ravel(), gy.ravel(), pixel_area


def rasterized_polygon_area(poly, n=512) -> float:
    """Pixel-count area of a polygon over its own bounding box."""
    shp = shapely_polygon(poly)
    xmin, ymin, xmax, ymax = shp.bounds
    px, py, pixel_area = pixel_grid(xmin, ymin, xmax, ymax, n)
    return float(shapely.contains_xy(shp, px, py).sum() * pixel_area)


def rasterized_intersection_area(poly, cell_vertices, n=512) -> float:
    """Pixel-count area of polygon-and-hexagon overlap."""
    shp = shapely_polygon(poly)
    hexagon = Polygon([(v.x, v.y) for v in cell_vertices])
    xmin, ymin, xmax, ymax = hexagon.bounds
    px, py, pixel_area = pixel_grid(xmin, ymin, xmax, ymax, n)
    mask = shapely.contains_xy(hexagon, px, py) & shapely.contains_xy(shp, px, py)
    return float(mask.sum() * pixel_area)


def rasterized_cell_stats(dataset, cell_vertices, variable_name, n=256):
    """Rasterization oracle for the per-cell weighted mean/variance/coverage.

    Samples pixel centers inside the hexagon; each feature contributes its
    (density-converted) value at every pixel it covers, weighted by its
    density reference when the variable declares one. Returns
    (mean, variance, coverage) or None when nothing contributes.
    """
    spec = dataset.variable(variable_name)
    density_spec = (
        dataset.variable(spec.density_weight_of)
        if spec.density_weight_of is not None
        else None
    )
    hexagon = Polygon([(v.x, v.y) for v in cell_vertices])
    xmin, ymin, xmax, ymax = hexagon.bounds
    px, py, _ = pixel_grid(xmin, ymin, xmax, ymax, n)
    in_hex = shapely.contains_xy(hexagon, px, py)
    px, py = px[in_hex], py[in_hex]
    if px.size == 0:
        return None

    w_sum = np.zeros(px.size)
    wv_sum = np.zeros(px.size)
    wv2_sum = np.zeros(px.size)
    any_cover = np.zeros(px.size, dtype=bool)
    for feature in dataset.features:
        if variable_name not in feature.attributes:
            continue
        value = feature.attributes[variable_name]
        if spec.kind == "extensive":
            value = value / feature.area
        if density_spec is not None:
            if density_spec.name not in feature.attributes:
                continue
            density = feature.attributes[density_spec.name]
            if density_spec.kind == "extensive":
                density = density / feature.area
        else:
            density = 1.0
        mask = np.zeros(px.size, dtype=bool)
        for part in feature.parts:
            mask |= shapely.contains_xy(shapely_polygon(part), px, py)
        any_cover |= mask
        w_sum[mask] += density
        wv_sum[mask] += density * value
        wv2_sum[mask] += density * value * value

    total_w = w_sum.sum()
    if total_w <= 0.0:
        return None
    mean = wv_sum.sum() / total_w
    variance = max(0.0, wv2_sum.sum() / total_w - mean * mean)
    coverage = any_cover.sum() / px.size
    return mean, variance, coverage
