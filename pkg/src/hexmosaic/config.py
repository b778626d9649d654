"""TOML config parsing for tileset compilation.

A config file has three sections::

    [grid]       e0, max_resolution, resolutions = [r_min, r_max],
                 z0, delta, min_coverage
    [encoding]   channel mapping, icon and ring parameters, and the
                 sub-tables [encoding.palette] / ring ramp choice
    [variables]  optional; either {file = "vars.toml"} or inline tables

Structural problems raise ConfigError with everything found wrong.
Semantic validation against a dataset happens at compile time.
"""
from __future__ import annotations

import sys
from pathlib import Path
from typing import Mapping

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .encode import EncodingConfig
from .errors import ConfigError
from .ingest import VariableSpec, variable_spec_from_table
from .palettes import RAMPS, VSUPPalette, build_palette
from .tileset import TilesetConfig


def _ramp_from_value(value, where: str, problems: list[str]):
    if isinstance(value, str):
        if value not in RAMPS:
            problems.append(f"{where}: unknown ramp {value!r}; have {sorted(RAMPS)}")
            return RAMPS["viridis"]
        return RAMPS[value]
    if isinstance(value, list):
        try:
            return tuple(tuple(int(c) for c in col) for col in value)
        except (TypeError, ValueError):
            problems.append(f"{where}: expected a ramp name or a list of [r, g, b] triples")
            return RAMPS["viridis"]
    problems.append(f"{where}: expected a ramp name or a list of [r, g, b] triples")
    return RAMPS["viridis"]


def _palette_from_table(table: Mapping, problems: list[str]) -> VSUPPalette:
    tiers = int(table.get("tiers", 3))
    bins = tuple(int(b) for b in table.get("bins_per_tier", (8, 4, 2)))
    diverging = bool(table.get("diverging", False))
    try:
        if "colors" in table:
            return VSUPPalette(
                tiers=tiers,
                bins_per_tier=bins,
                colors=tuple(
                    tuple(tuple(int(c) for c in col) for col in tier)
                    for tier in table["colors"]
                ),
                diverging=diverging,
            )
        ramp = _ramp_from_value(table.get("ramp", "blue_red"), "[encoding.palette] ramp", problems)
        return build_palette(ramp, tiers=tiers, bins_per_tier=bins, diverging=diverging)
    except (TypeError, ValueError) as exc:
        problems.append(f"[encoding.palette]: {exc}")
        return build_palette(RAMPS["blue_red"])


def encoding_config_from_table(table: Mapping, problems: list[str]) -> EncodingConfig:
    """Build an EncodingConfig from the [encoding] table, collecting problems."""
    for key in ("base_color_variable", "inner_ring_variable", "icon_variable"):
        if key not in table:
            problems.append(f"[encoding]: missing required key {key!r}")
    palette = _palette_from_table(table.get("palette", {}), problems)
    ring_ramp = _ramp_from_value(
        table.get("ring_ramp", "ylgnbu"), "[encoding] ring_ramp", problems
    )
    try:
        return EncodingConfig(
            base_color_variable=str(table.get("base_color_variable", "")),
            inner_ring_variable=str(table.get("inner_ring_variable", "")),
            icon_variable=str(table.get("icon_variable", "")),
            height_variable=table.get("height_variable"),
            icon_unit=float(table.get("icon_unit", 1.0)),
            icon_max=int(table.get("icon_max", 9)),
            icon_symbol=str(table.get("icon_symbol", "dot")),
            ring_thickness_range=tuple(
                float(t) for t in table.get("ring_thickness_range", (0.04, 0.16))
            ),
            icon_opacity_range=tuple(
                float(a) for a in table.get("icon_opacity_range", (0.3, 1.0))
            ),
            palette=palette,
            ring_ramp=ring_ramp,
            height_max=float(table.get("height_max", 30000.0)),
            height_reference_resolution=int(table.get("height_reference_resolution", 5)),
        )
    except (TypeError, ValueError) as exc:
        problems.append(f"[encoding]: {exc}")
        raise ConfigError(problems) from exc


def parse_tileset_config(path: str | Path) -> TilesetConfig:
    """Parse a tileset config file; raises ConfigError listing all problems."""
    path = Path(path)
    try:
        with path.open("rb") as fh:
            doc = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError([f"{path}: {exc}"]) from exc
    except OSError as exc:
        raise ConfigError([f"{path}: {exc}"]) from exc

    problems: list[str] = []
    grid = doc.get("grid", {})
    if not isinstance(grid, dict):
        problems.append("[grid] must be a table")
        grid = {}
    resolutions = grid.get("resolutions", [3, 5])
    if not (isinstance(resolutions, list) and len(resolutions) == 2):
        problems.append("[grid] resolutions must be [r_min, r_max]")
        resolutions = [3, 5]

    encoding_table = doc.get("encoding")
    if not isinstance(encoding_table, dict):
        problems.append("missing [encoding] table")
        raise ConfigError(problems)
    encoding = encoding_config_from_table(encoding_table, problems)
    if problems:
        raise ConfigError(problems)

    try:
        return TilesetConfig(
            encoding=encoding,
            name=str(doc.get("name", path.stem)),
            e0=float(grid.get("e0", 65536.0)),
            max_resolution=int(grid.get("max_resolution", 12)),
            resolutions=(int(resolutions[0]), int(resolutions[1])),
            z0=float(grid.get("z0", 6.0)),
            delta=float(grid.get("delta", 1.5)),
            min_coverage=float(grid.get("min_coverage", 0.05)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError([f"[grid]: {exc}"]) from exc


def parse_inline_variables(path: str | Path) -> tuple[VariableSpec, ...] | None:
    """Variables declared in the config itself, or via a file reference.

    Returns None when the config has no [variables] section (the usual case:
    the CLI takes the variable-spec file as its own argument).
    """
    path = Path(path)
    with path.open("rb") as fh:
        doc = tomllib.load(fh)
    section = doc.get("variables")
    if section is None:
        return None
    if "file" in section:
        from .ingest import load_variable_specs

        return load_variable_specs(path.parent / section["file"])
    return tuple(
        variable_spec_from_table(key, table, context=str(path))
        for key, table in section.items()
        if isinstance(table, dict)
    )
