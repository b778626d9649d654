"""Map per-cell aggregates onto tile visual channels.

Channels per tile: base color (value binned through the suppression
palette at the cell's confidence tier), inner ring (color from a ramp,
thickness from confidence), icons (count from value / icon_unit, opacity
from confidence), and an optional height. The engine emits counts and
opacity only; glyph artwork is a viewer asset keyed by ``icon_symbol``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from .aggregate import AggregateRecord
from .hexgrid import HexCell, HexGrid, HexIndex
from .ingest import VariableSpec
from .palettes import RAMPS, Color, VSUPPalette, build_palette, sample_ramp


def _default_palette() -> VSUPPalette:
    return build_palette(RAMPS["blue_red"], diverging=True)


@dataclass(frozen=True)
class EncodingConfig:
    """Declarative mapping from variables to tile channels."""

    base_color_variable: str
    inner_ring_variable: str
    icon_variable: str
    height_variable: str | None = None
    icon_unit: float = 1.0
    icon_max: int = 9
    icon_symbol: str = "dot"
    ring_thickness_range: tuple[float, float] = (0.04, 0.16)
    icon_opacity_range: tuple[float, float] = (0.3, 1.0)
    palette: VSUPPalette = field(default_factory=_default_palette)
    ring_ramp: tuple[Color, ...] = RAMPS["ylgnbu"]
    height_max: float = 30000.0
    height_reference_resolution: int = 5

    def __post_init__(self) -> None:
        object.__setattr__(self, "ring_thickness_range", tuple(self.ring_thickness_range))
        object.__setattr__(self, "icon_opacity_range", tuple(self.icon_opacity_range))
        object.__setattr__(
            self, "ring_ramp", tuple(tuple(int(c) for c in col) for col in self.ring_ramp)
        )

    def validate(self, variables: Mapping[str, VariableSpec] | None) -> list[str]:
        """Collect every configuration problem; empty list means valid.

        Pass None to skip the checks that need variable declarations
        (standalone config validation without a dataset).
        """
        problems = []
        channels = {
            "base_color_variable": self.base_color_variable,
            "inner_ring_variable": self.inner_ring_variable,
            "icon_variable": self.icon_variable,
        }
        if len(set(channels.values())) != 3:
            problems.append("base, ring, and icon channels must use three distinct variables")
        if variables is not None:
            for role, name in channels.items():
                if name not in variables:
                    problems.append(f"{role} {name!r} is not a declared variable")
            icon_spec = variables.get(self.icon_variable)
            if icon_spec is not None and not icon_spec.zero_anchored:
                problems.append(
                    f"icon variable {self.icon_variable!r} must be zero_anchored: "
                    "icon counts read as multiples of a meaningful zero"
                )
            if self.height_variable is not None and self.height_variable not in variables:
                problems.append(f"height_variable {self.height_variable!r} is not declared")
        if not self.icon_unit > 0.0:
            problems.append(f"icon_unit must be positive, got {self.icon_unit}")
        if self.icon_max < 1:
            problems.append(f"icon_max must be at least 1, got {self.icon_max}")
        t_min, t_max = self.ring_thickness_range
        if not 0.0 < t_min < t_max <= 0.25:
            problems.append(
                f"ring_thickness_range must satisfy 0 < t_min < t_max <= 0.25, "
                f"got ({t_min}, {t_max})"
            )
        a_min, a_max = self.icon_opacity_range
        if not (0.0 <= a_min < 1.0 and a_max == 1.0):
            problems.append(
                f"icon_opacity_range must be [a_min, 1.0] with a_min in [0, 1), "
                f"got ({a_min}, {a_max})"
            )
        if len(self.ring_ramp) < 2:
            problems.append("ring_ramp needs at least 2 colors")
        if self.height_max <= 0.0:
            problems.append(f"height_max must be positive, got {self.height_max}")
        return problems


@dataclass(frozen=True)
class EncodedTile:
    """Render-ready channel values for one cell, with aggregates for drill-down.

    Channel fields are None when the cell had no data for that channel's
    variable.
    """

    cell: HexIndex
    boundary: HexCell
    base_tier: int | None
    base_bin: int | None
    base_color: Color | None
    ring_color: Color | None
    ring_thickness: float | None
    icon_count: int | None
    icon_opacity: float | None
    height: float | None
    aggregates: AggregateRecord
    coverage_fraction: float
    clamped_channels: tuple[str, ...] = ()


def vsup_bin(
    value: float, confidence: float, spec: VariableSpec, palette: VSUPPalette
) -> tuple[int, int, Color]:
    """Quantize (value, confidence) to (tier, bin, color).

    The tier comes from 1 - confidence; the value bin is uniform across the
    variable's domain within that tier, clamped to the edge bins outside it.
    """
    if not math.isfinite(value):
        raise ValueError(f"value must be finite, got {value}")
    if not 0.0 <= confidence <= 1.0:
        raise ValueError(f"confidence must be in [0, 1], got {confidence}")
    tier = min(palette.tiers - 1, int(math.floor((1.0 - confidence) * palette.tiers)))
    bins = palette.bins_per_tier[tier]
    t = (value - spec.domain_min) / (spec.domain_max - spec.domain_min)
    b = min(bins - 1, max(0, int(math.floor(t * bins))))
    return tier, b, palette.colors[tier][b]


def icon_count(value: float, spec: VariableSpec, config: EncodingConfig) -> int:
    """Number of icon glyphs for a value: round(value / icon_unit), clamped."""
    if not spec.zero_anchored:
        raise ValueError(
            f"variable {spec.name!r} is not zero_anchored and cannot drive icons"
        )
    if value <= 0.0:
        return 0
    return min(config.icon_max, int(math.floor(value / config.icon_unit + 0.5)))


def ring_attributes(
    value: float, confidence: float, spec: VariableSpec, config: EncodingConfig
) -> tuple[Color, float]:
    """Ring color from the value ramp, thickness linear in confidence."""
    t = (value - spec.domain_min) / (spec.domain_max - spec.domain_min)
    color = sample_ramp(config.ring_ramp, t)
    t_min, t_max = config.ring_thickness_range
    return color, t_min + confidence * (t_max - t_min)


def icon_opacity(confidence: float, config: EncodingConfig) -> float:
    """Icon opacity linear in confidence over [a_min, 1]."""
    a_min = config.icon_opacity_range[0]
    return a_min + confidence * (1.0 - a_min)


def encode_record(
    record: AggregateRecord,
    config: EncodingConfig,
    variables: Mapping[str, VariableSpec],
    grid: HexGrid,
) -> EncodedTile:
    """Apply all channel mappings to one aggregate record.

    Channels whose variable is absent from the record are emitted as None;
    values outside their declared domain are clamped and flagged.
    """
    boundary = grid.boundary(record.cell)
    clamped: list[str] = []

    def out_of_domain(value: float, spec: VariableSpec) -> bool:
        return not spec.domain_min <= value <= spec.domain_max

    base_tier = base_bin = None
    base_color = None
    agg = record.per_variable.get(config.base_color_variable)
    if agg is not None:
        spec = variables[config.base_color_variable]
        base_tier, base_bin, base_color = vsup_bin(
            agg.weighted_mean, agg.confidence, spec, config.palette
        )
        if out_of_domain(agg.weighted_mean, spec):
            clamped.append("base")

    ring_color = None
    ring_thickness = None
    agg = record.per_variable.get(config.inner_ring_variable)
    if agg is not None:
        spec = variables[config.inner_ring_variable]
        ring_color, ring_thickness = ring_attributes(
            agg.weighted_mean, agg.confidence, spec, config
        )
        if out_of_domain(agg.weighted_mean, spec):
            clamped.append("ring")

    icons = None
    opacity = None
    agg = record.per_variable.get(config.icon_variable)
    if agg is not None:
        spec = variables[config.icon_variable]
        icons = icon_count(agg.weighted_mean, spec, config)
        opacity = icon_opacity(agg.confidence, config)

    height = None
    if config.height_variable is not None:
        agg = record.per_variable.get(config.height_variable)
        if agg is not None:
            spec = variables[config.height_variable]
            t = (agg.weighted_mean - spec.domain_min) / (spec.domain_max - spec.domain_min)
            if out_of_domain(agg.weighted_mean, spec):
                clamped.append("height")
            # keep apparent height proportional to cell size across resolutions
            scale = 7.0 ** ((config.height_reference_resolution - record.cell.resolution) / 2.0)
            height = min(1.0, max(0.0, t)) * config.height_max * scale

    coverage = max(a.coverage_fraction for a in record.per_variable.values())
    return EncodedTile(
        cell=record.cell,
        boundary=boundary,
        base_tier=base_tier,
        base_bin=base_bin,
        base_color=base_color,
        ring_color=ring_color,
        ring_thickness=ring_thickness,
        icon_count=icons,
        icon_opacity=opacity,
        height=height,
        aggregates=record,
        coverage_fraction=coverage,
        clamped_channels=tuple(clamped),
    )
