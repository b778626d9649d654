"""Per-cell spatially-weighted statistics over polygonal features.

A feature contributes to a cell in proportion to the area of overlap
between its polygons and the cell's hexagon. Variables that declare a
``density_weight_of`` reference additionally weight each contribution by
that feature's density value, so sparse regions do not dilute dense ones
(weight = overlap_area * density). The per-cell summary is a weighted
mean, a population-style weighted variance, a [0, 1] confidence derived
from the variance, and the covered fraction of the cell.

Cells touching the data edge keep their aggregates with coverage < 1;
filtering by minimum coverage is the tileset compiler's job, keeping
measurement separate from presentation.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Mapping, NamedTuple

from .geometry import intersection_area
from .hexgrid import HexCell, HexGrid, HexIndex, ProjectedPoint
from .ingest import Dataset, VariableSpec

log = logging.getLogger(__name__)

SQRT3 = math.sqrt(3.0)


class WeightEntry(NamedTuple):
    """One feature's contribution to one cell for one variable."""

    feature_id: str
    weight: float
    value: float


class VariableAggregate(NamedTuple):
    """Summary of one variable within one cell."""

    weighted_mean: float
    weighted_variance: float
    confidence: float
    coverage_fraction: float
    contributing_features: int


@dataclass(frozen=True)
class AggregateRecord:
    """All variable summaries for one cell; absent variables had no data."""

    cell: HexIndex
    per_variable: Mapping[str, VariableAggregate]


def _bbox_overlaps(a, b) -> bool:
    return not (
        a[1].x < b[0].x or b[1].x < a[0].x or a[1].y < b[0].y or b[1].y < a[0].y
    )


def _cell_feature_areas(dataset: Dataset, cell_geom: HexCell) -> dict[str, float]:
    """Overlap area per feature id, skipping features that miss the cell."""
    vx = [v.x for v in cell_geom.vertices]
    vy = [v.y for v in cell_geom.vertices]
    cell_bbox = (ProjectedPoint(min(vx), min(vy)), ProjectedPoint(max(vx), max(vy)))
    areas: dict[str, float] = {}
    for feature in dataset.features:
        if not _bbox_overlaps(feature.bbox, cell_bbox):
            continue
        a = sum(intersection_area(part, cell_geom) for part in feature.parts)
        if a > 0.0:
            areas[feature.id] = a
    return areas


def _entries_for_variable(
    dataset: Dataset,
    areas: Mapping[str, float],
    variable: VariableSpec,
) -> tuple[list[WeightEntry], float]:
    """Weight entries plus total contributing overlap area for one variable."""
    by_id = {f.id: f for f in dataset.features if f.id in areas}
    density_spec = (
        dataset.variable(variable.density_weight_of)
        if variable.density_weight_of is not None
        else None
    )
    entries: list[WeightEntry] = []
    covered = 0.0
    for fid, a in areas.items():
        feature = by_id[fid]
        if variable.name not in feature.attributes:
            continue
        value = feature.attributes[variable.name]
        if variable.kind == "extensive":
            value = value / feature.area
        if density_spec is not None:
            if density_spec.name not in feature.attributes:
                log.warning(
                    "feature %s: no %s value to density-weight %s; excluded",
                    fid, density_spec.name, variable.name,
                )
                continue
            density = feature.attributes[density_spec.name]
            if density_spec.kind == "extensive":
                density = density / feature.area
            weight = a * density
        else:
            weight = a
        entries.append(WeightEntry(fid, weight, value))
        covered += a
    return entries, covered


def weights_for_cell(
    dataset: Dataset, grid: HexGrid, cell: HexIndex, variable: VariableSpec
) -> list[WeightEntry]:
    """Contribution list (feature id, weight, value) for one cell and variable."""
    areas = _cell_feature_areas(dataset, grid.boundary(cell))
    entries, _ = _entries_for_variable(dataset, areas, variable)
    return entries


def weighted_mean(entries: list[WeightEntry]) -> float:
    """Weighted mean of the entry values; total weight must be positive."""
    total_w = sum(e.weight for e in entries)
    if total_w <= 0.0:
        raise ValueError("weighted_mean needs positive total weight")
    return sum(e.weight * e.value for e in entries) / total_w


def weighted_variance(entries: list[WeightEntry], mean: float) -> float:
    """Population-style weighted variance about the given mean, >= 0.

    Weights are areas rather than repeat counts, so no sample-size
    correction applies.
    """
    total_w = sum(e.weight for e in entries)
    if total_w <= 0.0:
        raise ValueError("weighted_variance needs positive total weight")
    var = sum(e.weight * (e.value - mean) ** 2 for e in entries) / total_w
    return max(0.0, var)


def confidence(variance: float, spec: VariableSpec) -> float:
    """Map a variance to confidence in [0, 1]: 1 - min(1, sigma/sigma_ref).

    sigma_ref defaults to a quarter of the variable's domain span, so a
    standard deviation spanning a quarter of the domain (or more) reads as
    zero confidence; declare sigma_ref on the variable to override.
    """
    if variance < 0.0:
        raise ValueError("variance must be >= 0")
    sigma_ref = spec.sigma_ref
    if sigma_ref is None:
        sigma_ref = (spec.domain_max - spec.domain_min) / 4.0
    return 1.0 - min(1.0, math.sqrt(variance) / sigma_ref)


def aggregate_cell(
    dataset: Dataset, grid: HexGrid, cell: HexIndex
) -> AggregateRecord | None:
    """Aggregate every variable within one cell; None when nothing contributes."""
    cell_geom = grid.boundary(cell)
    cell_area = 1.5 * SQRT3 * cell_geom.edge_length**2
    areas = _cell_feature_areas(dataset, cell_geom)
    if not areas:
        return None
    per_variable: dict[str, VariableAggregate] = {}
    for variable in dataset.variables:
        entries, covered = _entries_for_variable(dataset, areas, variable)
        total_w = sum(e.weight for e in entries)
        if not entries or total_w <= 0.0:
            continue
        mean = weighted_mean(entries)
        var = weighted_variance(entries, mean) if len(entries) > 1 else 0.0
        per_variable[variable.name] = VariableAggregate(
            weighted_mean=mean,
            weighted_variance=var,
            confidence=confidence(var, variable),
            coverage_fraction=min(1.0, max(0.0, covered / cell_area)),
            contributing_features=len(entries),
        )
    if not per_variable:
        return None
    return AggregateRecord(cell=cell, per_variable=per_variable)


def aggregate_resolution(
    dataset: Dataset, grid: HexGrid, resolution: int
) -> list[AggregateRecord]:
    """Aggregate records for every covered cell at one resolution.

    Cells come from covering the dataset bounding box and are emitted in
    (q, r) order; the whole pass is deterministic for a given dataset.
    """
    records = []
    for cell in grid.cells_covering(dataset.bbox, resolution):
        record = aggregate_cell(dataset, grid, cell)
        if record is not None:
            records.append(record)
    return records
