"""Lon/lat to planar-meter projections.

The grid itself is purely planar; this module supplies the pure functions
that move geographic input onto that plane and back. The default is a
spherical-Mercator projection, which keeps regional datasets (a state, a
river valley) within tolerable distortion.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .errors import ProjectionError

EARTH_RADIUS_M = 6378137.0

# Web-Mercator latitude limit: tan() blows up at the poles.
MAX_LATITUDE_DEG = 85.051128779806589


@dataclass(frozen=True)
class Projection:
    """A named pair of pure forward/inverse coordinate functions."""

    projection_id: str
    forward: Callable[[float, float], tuple[float, float]] = field(repr=False)
    inverse: Callable[[float, float], tuple[float, float]] = field(repr=False)


def _mercator_forward(lon: float, lat: float) -> tuple[float, float]:
    if not (math.isfinite(lon) and math.isfinite(lat)):
        raise ProjectionError(f"non-finite coordinate ({lon}, {lat})")
    if abs(lat) > MAX_LATITUDE_DEG:
        raise ProjectionError(f"latitude {lat} outside Mercator extent")
    if abs(lon) > 180.0:
        raise ProjectionError(f"longitude {lon} outside [-180, 180]")
    x = EARTH_RADIUS_M * math.radians(lon)
    y = EARTH_RADIUS_M * math.log(math.tan(math.pi / 4.0 + math.radians(lat) / 2.0))
    return x, y


def _mercator_inverse(x: float, y: float) -> tuple[float, float]:
    lon = math.degrees(x / EARTH_RADIUS_M)
    lat = math.degrees(2.0 * math.atan(math.exp(y / EARTH_RADIUS_M)) - math.pi / 2.0)
    return lon, lat


WEB_MERCATOR = Projection("web-mercator", _mercator_forward, _mercator_inverse)

PROJECTIONS: dict[str, Projection] = {WEB_MERCATOR.projection_id: WEB_MERCATOR}


def get_projection(projection_id: str) -> Projection:
    """Look up a registered projection by id."""
    try:
        return PROJECTIONS[projection_id]
    except KeyError:
        raise ProjectionError(f"unknown projection {projection_id!r}") from None
