"""Compile datasets into multi-resolution tilesets; own the on-disk format.

The persistence format is a single self-describing text file (extension
``.hxt``): a ``HEXT <version>`` header line, one canonical-JSON meta line,
then one canonical-JSON record per tile. Canonical form sorts object keys
and writes every float with 17 significant digits, so identical tilesets
are byte-identical and the content hash is stable across platforms.
"""
from __future__ import annotations

import hashlib
import json
import logging
import math
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Mapping

from .aggregate import AggregateRecord, VariableAggregate, aggregate_resolution
from .encode import EncodedTile, EncodingConfig, encode_record
from .errors import ConfigError, CorruptTilesetError, UnsupportedVersionError
from .hexgrid import HexCell, HexGrid, ProjectedPoint, format_index, parse_index
from .ingest import Dataset, VariableSpec
from .palettes import VSUPPalette

log = logging.getLogger(__name__)

MAGIC = "HEXT"
FORMAT_VERSION = 1


# -- canonical serialization -------------------------------------------------

def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite float {x!r}")
    s = format(x, ".17g")
    if not any(c in s for c in ".eE"):
        s += ".0"
    return s


def _write_canonical(obj, parts: list[str]) -> None:
    if obj is None:
        parts.append("null")
    elif obj is True:
        parts.append("true")
    elif obj is False:
        parts.append("false")
    elif isinstance(obj, int):
        parts.append(str(obj))
    elif isinstance(obj, float):
        parts.append(_fmt_float(obj))
    elif isinstance(obj, str):
        parts.append(json.dumps(obj, ensure_ascii=True))
    elif isinstance(obj, (list, tuple)):
        parts.append("[")
        for i, v in enumerate(obj):
            if i:
                parts.append(",")
            _write_canonical(v, parts)
        parts.append("]")
    elif isinstance(obj, dict):
        parts.append("{")
        for i, k in enumerate(sorted(obj)):
            if not isinstance(k, str):
                raise TypeError(f"canonical JSON requires str keys, got {k!r}")
            if i:
                parts.append(",")
            parts.append(json.dumps(k, ensure_ascii=True))
            parts.append(":")
            _write_canonical(obj[k], parts)
        parts.append("}")
    else:
        raise TypeError(f"cannot canonically serialize {type(obj).__name__}")


def canonical_json(obj) -> str:
    """Deterministic JSON: sorted keys, floats at 17 significant digits."""
    parts: list[str] = []
    _write_canonical(obj, parts)
    return "".join(parts)


# -- meta / record dict round-trips -------------------------------------------

def variable_to_dict(v: VariableSpec) -> dict:
    return {
        "name": v.name,
        "kind": v.kind,
        "domain": [float(v.domain_min), float(v.domain_max)],
        "zero_anchored": v.zero_anchored,
        "density_weight_of": v.density_weight_of,
        "units_label": v.units_label,
        "sigma_ref": None if v.sigma_ref is None else float(v.sigma_ref),
    }


def variable_from_dict(d: Mapping) -> VariableSpec:
    return VariableSpec(
        name=d["name"],
        kind=d["kind"],
        domain_min=float(d["domain"][0]),
        domain_max=float(d["domain"][1]),
        zero_anchored=bool(d["zero_anchored"]),
        density_weight_of=d.get("density_weight_of"),
        units_label=d.get("units_label", ""),
        sigma_ref=None if d.get("sigma_ref") is None else float(d["sigma_ref"]),
    )


def encoding_to_dict(e: EncodingConfig) -> dict:
    return {
        "base_color_variable": e.base_color_variable,
        "inner_ring_variable": e.inner_ring_variable,
        "icon_variable": e.icon_variable,
        "height_variable": e.height_variable,
        "icon_unit": float(e.icon_unit),
        "icon_max": e.icon_max,
        "icon_symbol": e.icon_symbol,
        "ring_thickness_range": [float(t) for t in e.ring_thickness_range],
        "icon_opacity_range": [float(a) for a in e.icon_opacity_range],
        "ring_ramp": [list(c) for c in e.ring_ramp],
        "palette": {
            "tiers": e.palette.tiers,
            "bins_per_tier": list(e.palette.bins_per_tier),
            "diverging": e.palette.diverging,
            "colors": [[list(c) for c in tier] for tier in e.palette.colors],
        },
        "height_max": float(e.height_max),
        "height_reference_resolution": e.height_reference_resolution,
    }


def encoding_from_dict(d: Mapping) -> EncodingConfig:
    p = d["palette"]
    return EncodingConfig(
        base_color_variable=d["base_color_variable"],
        inner_ring_variable=d["inner_ring_variable"],
        icon_variable=d["icon_variable"],
        height_variable=d.get("height_variable"),
        icon_unit=float(d["icon_unit"]),
        icon_max=int(d["icon_max"]),
        icon_symbol=d["icon_symbol"],
        ring_thickness_range=tuple(float(t) for t in d["ring_thickness_range"]),
        icon_opacity_range=tuple(float(a) for a in d["icon_opacity_range"]),
        palette=VSUPPalette(
            tiers=int(p["tiers"]),
            bins_per_tier=tuple(int(b) for b in p["bins_per_tier"]),
            colors=tuple(tuple(tuple(c) for c in tier) for tier in p["colors"]),
            diverging=bool(p["diverging"]),
        ),
        ring_ramp=tuple(tuple(c) for c in d["ring_ramp"]),
        height_max=float(d["height_max"]),
        height_reference_resolution=int(d["height_reference_resolution"]),
    )


@dataclass(frozen=True)
class TileSetMeta:
    """Everything needed to interpret the tiles, plus provenance."""

    name: str
    projection_id: str
    resolutions: tuple[int, int]
    zoom_policy: tuple[float, float]
    variables: tuple[VariableSpec, ...]
    encoding: EncodingConfig
    e0: float
    max_resolution: int
    min_coverage: float
    tile_counts: Mapping[int, int]
    created_at: str
    content_hash: str

    def grid(self) -> HexGrid:
        return HexGrid(self.e0, self.max_resolution)


@dataclass(frozen=True)
class TileSet:
    meta: TileSetMeta
    tiles: Mapping[int, tuple[EncodedTile, ...]]


def meta_to_dict(meta: TileSetMeta) -> dict:
    """Full meta as plain data; the same dict backs files, CLI, and HTTP."""
    return {
        "name": meta.name,
        "projection_id": meta.projection_id,
        "resolutions": list(meta.resolutions),
        "zoom_policy": {"z0": float(meta.zoom_policy[0]), "delta": float(meta.zoom_policy[1])},
        "variables": [variable_to_dict(v) for v in meta.variables],
        "encoding": encoding_to_dict(meta.encoding),
        "grid": {"e0": float(meta.e0), "max_resolution": meta.max_resolution},
        "min_coverage": float(meta.min_coverage),
        "tile_counts": {str(r): n for r, n in sorted(meta.tile_counts.items())},
        "created_at": meta.created_at,
        "content_hash": meta.content_hash,
    }


def meta_from_dict(d: Mapping) -> TileSetMeta:
    return TileSetMeta(
        name=d["name"],
        projection_id=d["projection_id"],
        resolutions=(int(d["resolutions"][0]), int(d["resolutions"][1])),
        zoom_policy=(float(d["zoom_policy"]["z0"]), float(d["zoom_policy"]["delta"])),
        variables=tuple(variable_from_dict(v) for v in d["variables"]),
        encoding=encoding_from_dict(d["encoding"]),
        e0=float(d["grid"]["e0"]),
        max_resolution=int(d["grid"]["max_resolution"]),
        min_coverage=float(d["min_coverage"]),
        tile_counts={int(r): int(n) for r, n in d["tile_counts"].items()},
        created_at=d["created_at"],
        content_hash=d["content_hash"],
    )


def tile_to_record(tile: EncodedTile) -> dict:
    """Flatten one tile to the plain-data shape used in files and payloads."""
    rec: dict = {
        "cell": format_index(tile.cell),
        "center": [tile.boundary.center.x, tile.boundary.center.y],
        "vertices": [[v.x, v.y] for v in tile.boundary.vertices],
        "edge_length": tile.boundary.edge_length,
        "base": None,
        "ring": None,
        "icons": None,
        "height": tile.height,
        "coverage": tile.coverage_fraction,
        "clamped": list(tile.clamped_channels),
        "aggregates": {
            name: {
                "mean": a.weighted_mean,
                "variance": a.weighted_variance,
                "confidence": a.confidence,
                "coverage": a.coverage_fraction,
                "n": a.contributing_features,
            }
            for name, a in sorted(tile.aggregates.per_variable.items())
        },
    }
    if tile.base_color is not None:
        rec["base"] = {"tier": tile.base_tier, "bin": tile.base_bin, "color": list(tile.base_color)}
    if tile.ring_color is not None:
        rec["ring"] = {"color": list(tile.ring_color), "thickness": tile.ring_thickness}
    if tile.icon_count is not None:
        rec["icons"] = {"count": tile.icon_count, "opacity": tile.icon_opacity}
    return rec


def tile_from_record(rec: Mapping) -> EncodedTile:
    cell = parse_index(rec["cell"])
    boundary = HexCell(
        index=cell,
        center=ProjectedPoint(*rec["center"]),
        vertices=tuple(ProjectedPoint(*v) for v in rec["vertices"]),
        edge_length=float(rec["edge_length"]),
    )
    aggregates = AggregateRecord(
        cell=cell,
        per_variable={
            name: VariableAggregate(
                weighted_mean=float(a["mean"]),
                weighted_variance=float(a["variance"]),
                confidence=float(a["confidence"]),
                coverage_fraction=float(a["coverage"]),
                contributing_features=int(a["n"]),
            )
            for name, a in rec["aggregates"].items()
        },
    )
    base = rec.get("base")
    ring = rec.get("ring")
    icons = rec.get("icons")
    return EncodedTile(
        cell=cell,
        boundary=boundary,
        base_tier=None if base is None else int(base["tier"]),
        base_bin=None if base is None else int(base["bin"]),
        base_color=None if base is None else tuple(base["color"]),
        ring_color=None if ring is None else tuple(ring["color"]),
        ring_thickness=None if ring is None else float(ring["thickness"]),
        icon_count=None if icons is None else int(icons["count"]),
        icon_opacity=None if icons is None else float(icons["opacity"]),
        height=None if rec.get("height") is None else float(rec["height"]),
        aggregates=aggregates,
        coverage_fraction=float(rec["coverage"]),
        clamped_channels=tuple(rec.get("clamped", ())),
    )


# -- compilation ---------------------------------------------------------------

@dataclass(frozen=True)
class TilesetConfig:
    """Full compile-time configuration (grid, zoom policy, encoding)."""

    encoding: EncodingConfig
    name: str = "tileset"
    e0: float = 65536.0
    max_resolution: int = 12
    resolutions: tuple[int, int] = (3, 5)
    z0: float = 6.0
    delta: float = 1.5
    min_coverage: float = 0.05


def config_problems(
    config: TilesetConfig, variables: Mapping[str, VariableSpec] | None
) -> list[str]:
    """Every validation problem with a config, at once.

    Pass the dataset's variable map for full validation, or None to check
    only what a config file can promise on its own.
    """
    problems = []
    r_min, r_max = config.resolutions
    if not (0 <= r_min <= r_max <= config.max_resolution):
        problems.append(
            f"resolution range [{r_min}, {r_max}] must be increasing and within "
            f"[0, {config.max_resolution}]"
        )
    if config.e0 <= 0:
        problems.append(f"root edge length must be positive, got {config.e0}")
    if config.delta <= 0:
        problems.append(f"zoom delta must be positive, got {config.delta}")
    if not 0.0 <= config.min_coverage <= 1.0:
        problems.append(f"min_coverage must be in [0, 1], got {config.min_coverage}")
    problems.extend(config.encoding.validate(variables))
    return problems


def compile_tileset(dataset: Dataset, config: TilesetConfig) -> TileSet:
    """Aggregate, filter by coverage, and encode every configured resolution."""
    problems = config_problems(config, {v.name: v for v in dataset.variables})
    if problems:
        raise ConfigError(problems)
    grid = HexGrid(config.e0, config.max_resolution)
    variables = {v.name: v for v in dataset.variables}
    r_min, r_max = config.resolutions
    tiles: dict[int, tuple[EncodedTile, ...]] = {}
    total = 0
    for res in range(r_min, r_max + 1):
        layer = []
        for record in aggregate_resolution(dataset, grid, res):
            tile = encode_record(record, config.encoding, variables, grid)
            if tile.coverage_fraction >= config.min_coverage:
                layer.append(tile)
        tiles[res] = tuple(layer)
        total += len(layer)
    if total == 0:
        log.warning("empty tileset: no cell passed the %g coverage filter", config.min_coverage)

    meta = TileSetMeta(
        name=config.name,
        projection_id=dataset.projection_id,
        resolutions=(r_min, r_max),
        zoom_policy=(config.z0, config.delta),
        variables=dataset.variables,
        encoding=config.encoding,
        e0=config.e0,
        max_resolution=config.max_resolution,
        min_coverage=config.min_coverage,
        tile_counts={res: len(layer) for res, layer in tiles.items()},
        created_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        content_hash="",
    )
    ts = TileSet(meta=meta, tiles=tiles)
    content_hash = compute_content_hash(ts)
    return TileSet(meta=replace(meta, content_hash=content_hash), tiles=tiles)


def resolution_for_zoom(z: float, meta: TileSetMeta) -> int:
    """Grid resolution for a map zoom level, clamped to the compiled range."""
    r_min, r_max = meta.resolutions
    z0, delta = meta.zoom_policy
    r = r_min + math.floor((z - z0) / delta)
    return min(r_max, max(r_min, int(r)))


# -- persistence ---------------------------------------------------------------

def _tile_lines(ts: TileSet) -> list[str]:
    return [
        canonical_json(tile_to_record(tile))
        for res in sorted(ts.tiles)
        for tile in ts.tiles[res]
    ]


def compute_content_hash(ts: TileSet) -> str:
    """Digest over header, meta (sans volatile fields), and every tile byte."""
    meta_dict = meta_to_dict(ts.meta)
    meta_dict.pop("created_at")
    meta_dict.pop("content_hash")
    h = hashlib.sha256()
    h.update(f"{MAGIC} {FORMAT_VERSION}\n".encode())
    h.update(canonical_json(meta_dict).encode())
    h.update(b"\n")
    for line in _tile_lines(ts):
        h.update(line.encode())
        h.update(b"\n")
    return h.hexdigest()


def save_tileset(ts: TileSet, path: str | Path) -> None:
    """Write the tileset; byte output is deterministic given equal content."""
    out = [f"{MAGIC} {FORMAT_VERSION}", canonical_json(meta_to_dict(ts.meta))]
    out.extend(_tile_lines(ts))
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")


def load_tileset(path: str | Path) -> TileSet:
    """Read a tileset back; verifies structure, counts, and content hash."""
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines or not lines[0].startswith(MAGIC):
        raise CorruptTilesetError(f"{path}: not a tileset file")
    header = lines[0].split()
    if len(header) != 2 or not header[1].isdigit():
        raise CorruptTilesetError(f"{path}: malformed header {lines[0]!r}")
    version = int(header[1])
    if version != FORMAT_VERSION:
        raise UnsupportedVersionError(
            f"{path}: format version {version}, this build reads version {FORMAT_VERSION}"
        )
    if len(lines) < 2:
        raise CorruptTilesetError(f"{path}: missing meta line")
    try:
        meta = meta_from_dict(json.loads(lines[1]))
        tile_lines = [ln for ln in lines[2:] if ln]
        tiles_by_res: dict[int, list[EncodedTile]] = {}
        for ln in tile_lines:
            tile = tile_from_record(json.loads(ln))
            tiles_by_res.setdefault(tile.cell.resolution, []).append(tile)
    except (json.JSONDecodeError, KeyError, IndexError, TypeError, ValueError) as exc:
        raise CorruptTilesetError(f"{path}: unreadable record: {exc}") from exc

    expected = {res: n for res, n in meta.tile_counts.items()}
    found = {res: len(layer) for res, layer in tiles_by_res.items()}
    r_min, r_max = meta.resolutions
    for res in range(r_min, r_max + 1):
        if expected.get(res, 0) != found.get(res, 0):
            raise CorruptTilesetError(
                f"{path}: truncated or padded: resolution {res} promises "
                f"{expected.get(res, 0)} tiles, file holds {found.get(res, 0)}"
            )
    tiles: dict[int, tuple[EncodedTile, ...]] = {}
    for res, layer in tiles_by_res.items():
        cells = [t.cell for t in layer]
        if sorted(set(cells), key=lambda c: (c.q, c.r)) != cells:
            raise CorruptTilesetError(f"{path}: resolution {res} tiles not unique and sorted")
        tiles[res] = tuple(layer)
    for res in range(r_min, r_max + 1):
        tiles.setdefault(res, ())

    ts = TileSet(meta=meta, tiles=tiles)
    actual = compute_content_hash(ts)
    if actual != meta.content_hash:
        raise CorruptTilesetError(
            f"{path}: content hash mismatch (stored {meta.content_hash[:12]}..., "
            f"recomputed {actual[:12]}...)"
        )
    return ts
