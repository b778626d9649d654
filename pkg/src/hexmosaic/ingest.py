"""Load polygonal feature data plus variable declarations into a Dataset.

Input geometry is a GeoJSON feature collection in WGS84 lon/lat with
Polygon/MultiPolygon geometries only; variable declarations come from a
TOML file with one table per variable. Geometry is projected onto the
working plane at load time and never clipped: features straddling the
dataset edge simply produce partial coverage downstream.

Variable kinds:

* ``intensive`` values (rates, percentages, levels) are area-weight
  averaged as-is.
* ``extensive`` values (counts, volumes) are converted to densities
  (value / feature area) before any aggregation and treated as intensive
  from then on. Their declared domain, units label, and any confidence
  override therefore describe the density, not the raw total.
"""
from __future__ import annotations

import json
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import (
    DatasetValidationError,
    GeoParseError,
    MergeError,
    SpecParseError,
)
from .geometry import PolygonGeometry, Ring, polygon_area
from .hexgrid import ProjectedPoint
from .projection import WEB_MERCATOR, Projection

log = logging.getLogger(__name__)

VARIABLE_KINDS = ("intensive", "extensive")

DIAGNOSTIC_KEYS = ("non_numeric", "out_of_domain", "zero_area_skipped", "density_missing")


@dataclass(frozen=True)
class VariableSpec:
    """Declaration of one attribute: its kind, domain, and encoding hints."""

    name: str
    kind: str
    domain_min: float
    domain_max: float
    zero_anchored: bool = False
    density_weight_of: str | None = None
    units_label: str = ""
    sigma_ref: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in VARIABLE_KINDS:
            raise ValueError(f"variable {self.name!r}: kind must be one of {VARIABLE_KINDS}")
        if not self.domain_min < self.domain_max:
            raise ValueError(
                f"variable {self.name!r}: domain_min must be < domain_max, "
                f"got [{self.domain_min}, {self.domain_max}]"
            )
        if self.zero_anchored and not (self.domain_min <= 0.0 <= self.domain_max):
            raise ValueError(f"variable {self.name!r}: zero_anchored domain must contain 0")
        if self.sigma_ref is not None and self.sigma_ref <= 0.0:
            raise ValueError(f"variable {self.name!r}: sigma_ref must be positive")


@dataclass(frozen=True)
class Feature:
    """One polygonal feature with its numeric attributes.

    ``attributes`` holds only the values that survived validation; a missing
    key means the feature contributes nothing to that variable.
    """

    id: str
    parts: tuple[PolygonGeometry, ...]
    attributes: Mapping[str, float]
    area: float = field(init=False)
    bbox: tuple[ProjectedPoint, ProjectedPoint] = field(init=False)

    def __post_init__(self) -> None:
        if not self.parts:
            raise ValueError(f"feature {self.id!r} has no geometry")
        area = sum(polygon_area(p) for p in self.parts)
        if area <= 0.0:
            raise ValueError(f"feature {self.id!r} has zero area")
        xs = [p.x for part in self.parts for p in part.outer.points]
        ys = [p.y for part in self.parts for p in part.outer.points]
        object.__setattr__(self, "area", area)
        object.__setattr__(
            self,
            "bbox",
            (ProjectedPoint(min(xs), min(ys)), ProjectedPoint(max(xs), max(ys))),
        )


@dataclass(frozen=True)
class Dataset:
    """Immutable bundle of features, variable declarations, and provenance."""

    features: tuple[Feature, ...]
    variables: tuple[VariableSpec, ...]
    projection_id: str
    bbox: tuple[ProjectedPoint, ProjectedPoint]
    diagnostics: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        declared = set(names)
        for v in self.variables:
            if v.density_weight_of is not None and v.density_weight_of not in declared:
                raise ValueError(
                    f"variable {v.name!r}: density_weight_of names "
                    f"undeclared variable {v.density_weight_of!r}"
                )
        ids = [f.id for f in self.features]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate feature ids")
        for f in self.features:
            for key in f.attributes:
                if key not in declared:
                    raise ValueError(f"feature {f.id!r} carries undeclared attribute {key!r}")

    def variable(self, name: str) -> VariableSpec:
        for v in self.variables:
            if v.name == name:
                return v
        raise KeyError(name)


def _dataset_bbox(features) -> tuple[ProjectedPoint, ProjectedPoint]:
    if not features:
        return ProjectedPoint(0.0, 0.0), ProjectedPoint(0.0, 0.0)
    xs0 = [f.bbox[0].x for f in features]
    ys0 = [f.bbox[0].y for f in features]
    xs1 = [f.bbox[1].x for f in features]
    ys1 = [f.bbox[1].y for f in features]
    return ProjectedPoint(min(xs0), min(ys0)), ProjectedPoint(max(xs1), max(ys1))


def load_variable_specs(spec_file: str | Path) -> tuple[VariableSpec, ...]:
    """Parse the variable declaration file (one TOML table per variable)."""
    path = Path(spec_file)
    try:
        with path.open("rb") as fh:
            doc = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise SpecParseError(f"{path}: {exc}") from exc
    specs = []
    for key, table in doc.items():
        if not isinstance(table, dict):
            raise SpecParseError(f"{path}: top-level key {key!r} is not a variable table")
        specs.append(variable_spec_from_table(key, table, context=str(path)))
    if not specs:
        raise SpecParseError(f"{path}: no variables declared")
    return tuple(specs)


def variable_spec_from_table(key: str, table: Mapping, context: str = "") -> VariableSpec:
    """Build a VariableSpec from one parsed TOML table."""
    where = f"{context}: [{key}]" if context else f"[{key}]"
    try:
        domain = table["domain"]
        if not (isinstance(domain, (list, tuple)) and len(domain) == 2):
            raise SpecParseError(f"{where}: domain must be [min, max]")
        return VariableSpec(
            name=str(table.get("name", key)),
            kind=str(table.get("kind", "intensive")),
            domain_min=float(domain[0]),
            domain_max=float(domain[1]),
            zero_anchored=bool(table.get("zero_anchored", False)),
            density_weight_of=table.get("density_weight_of"),
            units_label=str(table.get("units_label", "")),
            sigma_ref=(None if table.get("sigma_ref") is None else float(table["sigma_ref"])),
        )
    except KeyError as exc:
        raise SpecParseError(f"{where}: missing required key {exc.args[0]!r}") from exc
    except (TypeError, ValueError) as exc:
        raise SpecParseError(f"{where}: {exc}") from exc


def _project_ring(coords, projection: Projection, where: str) -> Ring:
    if not isinstance(coords, list) or len(coords) < 4:
        raise GeoParseError(f"{where}: ring must be a list of at least 4 positions")
    pts = []
    for pos in coords:
        if not (isinstance(pos, (list, tuple)) and len(pos) >= 2):
            raise GeoParseError(f"{where}: bad position {pos!r}")
        pts.append(projection.forward(float(pos[0]), float(pos[1])))
    # GeoJSON rings repeat the first position at the end; Ring is implicitly
    # closed, so strip the duplicates.
    while len(pts) > 1 and pts[0] == pts[-1]:
        pts.pop()
    # collapse consecutive duplicates introduced by projection rounding
    deduped = [ProjectedPoint(*pts[0])]
    for p in pts[1:]:
        if (p[0], p[1]) != (deduped[-1].x, deduped[-1].y):
            deduped.append(ProjectedPoint(*p))
    if len(deduped) < 3:
        raise GeoParseError(f"{where}: ring collapsed to fewer than 3 distinct points")
    return Ring(tuple(deduped))


def _parse_polygon(coords, projection: Projection, where: str) -> PolygonGeometry:
    if not isinstance(coords, list) or not coords:
        raise GeoParseError(f"{where}: polygon has no rings")
    outer = _project_ring(coords[0], projection, where)
    holes = tuple(
        _project_ring(c, projection, f"{where} hole {i}") for i, c in enumerate(coords[1:])
    )
    return PolygonGeometry(outer, holes)


def _feature_parts(geometry, projection: Projection, where: str) -> tuple[PolygonGeometry, ...]:
    if not isinstance(geometry, dict):
        raise GeoParseError(f"{where}: missing geometry object")
    gtype = geometry.get("type")
    coords = geometry.get("coordinates")
    if gtype == "Polygon":
        return (_parse_polygon(coords, projection, where),)
    if gtype == "MultiPolygon":
        if not isinstance(coords, list):
            raise GeoParseError(f"{where}: bad MultiPolygon coordinates")
        return tuple(
            _parse_polygon(c, projection, f"{where} part {i}") for i, c in enumerate(coords)
        )
    raise GeoParseError(f"{where}: unsupported geometry type {gtype!r}")


def _validated_value(raw, spec: VariableSpec, feature_area: float, diagnostics: dict) -> float | None:
    """Returns the attribute value to store, or None when it must be missing."""
    if raw is None:
        return None
    if isinstance(raw, bool) or not isinstance(raw, (int, float)) or not math.isfinite(raw):
        diagnostics["non_numeric"] += 1
        return None
    value = float(raw)
    checked = value / feature_area if spec.kind == "extensive" else value
    if not spec.domain_min <= checked <= spec.domain_max:
        diagnostics["out_of_domain"] += 1
        return None
    return value


def load_dataset(
    geo_file: str | Path,
    spec_file: str | Path,
    projection: Projection = WEB_MERCATOR,
) -> Dataset:
    """Load a GeoJSON feature collection against a variable-spec file.

    Attribute values that are non-numeric or whose (density-converted)
    value falls outside the declared domain are marked missing and counted
    in the dataset diagnostics. Zero-area features are skipped with a
    warning. Undeclared attribute keys fail the whole load, naming every
    offender.
    """
    geo_path = Path(geo_file)
    variables = load_variable_specs(spec_file)
    declared = {v.name: v for v in variables}

    try:
        doc = json.loads(geo_path.read_text())
    except json.JSONDecodeError as exc:
        raise GeoParseError(f"{geo_path}: line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(doc, dict) or doc.get("type") != "FeatureCollection":
        raise GeoParseError(f"{geo_path}: not a FeatureCollection")
    raw_features = doc.get("features")
    if not isinstance(raw_features, list):
        raise GeoParseError(f"{geo_path}: missing features array")

    diagnostics = {k: 0 for k in DIAGNOSTIC_KEYS}
    undeclared: dict[str, list[str]] = {}
    features: list[Feature] = []
    seen_ids: set[str] = set()
    for i, raw in enumerate(raw_features):
        if not isinstance(raw, dict) or raw.get("type") != "Feature":
            raise GeoParseError(f"{geo_path}: feature {i}: not a Feature object")
        props = raw.get("properties") or {}
        if not isinstance(props, dict):
            raise GeoParseError(f"{geo_path}: feature {i}: properties must be an object")
        fid = str(raw.get("id", props.get("id", f"feature_{i}")))
        where = f"{geo_path}: feature {i} ({fid})"
        if fid in seen_ids:
            raise GeoParseError(f"{where}: duplicate feature id")
        seen_ids.add(fid)

        parts = _feature_parts(raw.get("geometry"), projection, where)
        total_area = sum(polygon_area(p) for p in parts)
        if total_area <= 0.0:
            log.warning("%s: zero-area geometry, feature skipped", where)
            diagnostics["zero_area_skipped"] += 1
            continue

        attributes: dict[str, float] = {}
        for key, raw_value in props.items():
            if key == "id":
                continue
            spec = declared.get(key)
            if spec is None:
                undeclared.setdefault(key, []).append(fid)
                continue
            value = _validated_value(raw_value, spec, total_area, diagnostics)
            if value is not None:
                attributes[key] = value
        features.append(Feature(id=fid, parts=parts, attributes=attributes))

    if undeclared:
        details = "; ".join(
            f"{key!r} (features {', '.join(fids[:5])}{'...' if len(fids) > 5 else ''})"
            for key, fids in sorted(undeclared.items())
        )
        raise DatasetValidationError(f"{geo_path}: undeclared attributes: {details}")

    return Dataset(
        features=tuple(features),
        variables=variables,
        projection_id=projection.projection_id,
        bbox=_dataset_bbox(features),
        diagnostics=diagnostics,
    )


def merge_datasets(a: Dataset, b: Dataset) -> Dataset:
    """Concatenate two layers with disjoint variables into one dataset."""
    if a.projection_id != b.projection_id:
        raise MergeError(
            f"projection mismatch: {a.projection_id!r} vs {b.projection_id!r}"
        )
    clash = {v.name for v in a.variables} & {v.name for v in b.variables}
    if clash:
        raise MergeError(f"variable names declared by both layers: {sorted(clash)}")
    if not b.features and not b.variables:
        return a
    if not a.features and not a.variables:
        return b
    id_clash = {f.id for f in a.features} & {f.id for f in b.features}
    if id_clash:
        raise MergeError(f"feature ids present in both layers: {sorted(id_clash)[:5]}")
    features = a.features + b.features
    diagnostics = {
        k: a.diagnostics.get(k, 0) + b.diagnostics.get(k, 0)
        for k in sorted(set(a.diagnostics) | set(b.diagnostics))
    }
    return Dataset(
        features=features,
        variables=a.variables + b.variables,
        projection_id=a.projection_id,
        bbox=_dataset_bbox(features),
        diagnostics=diagnostics,
    )
