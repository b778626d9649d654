"""Color ramps and value-suppressing palettes.

A value-suppressing palette quantizes (value, confidence) pairs so that
low-confidence tiers expose strictly fewer distinguishable colors than
high-confidence ones: uncertain cells literally cannot show fine value
detail. Tier 0 is the most confident tier.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

Color = tuple[int, int, int]

NEUTRAL: Color = (208, 208, 208)

RAMPS: dict[str, tuple[Color, ...]] = {
    # diverging, low -> high
    "blue_red": (
        (5, 48, 97), (33, 102, 172), (67, 147, 195), (146, 197, 222),
        (247, 247, 247),
        (244, 165, 130), (214, 96, 77), (178, 24, 43), (103, 0, 31),
    ),
    # sequential
    "viridis": (
        (68, 1, 84), (72, 40, 120), (62, 74, 137), (49, 104, 142),
        (38, 130, 142), (31, 158, 137), (53, 183, 121), (109, 205, 89),
        (180, 222, 44), (253, 231, 37),
    ),
    # sequential multi-hue, default ring ramp
    "ylgnbu": (
        (255, 255, 217), (237, 248, 177), (199, 233, 180), (127, 205, 187),
        (65, 182, 196), (29, 145, 192), (34, 94, 168), (37, 52, 148), (8, 29, 88),
    ),
    "oranges": (
        (255, 245, 235), (254, 230, 206), (253, 208, 162), (253, 174, 107),
        (253, 141, 60), (241, 105, 19), (217, 72, 1), (166, 54, 3), (127, 39, 4),
    ),
    "greens": (
        (247, 252, 245), (229, 245, 224), (199, 233, 192), (161, 217, 155),
        (116, 196, 118), (65, 171, 93), (35, 139, 69), (0, 109, 44), (0, 68, 27),
    ),
}


def sample_ramp(colors: tuple[Color, ...], t: float) -> Color:
    """Linearly interpolate a ramp at t in [0, 1] (clamped)."""
    if len(colors) < 2:
        raise ValueError("ramp needs at least 2 colors")
    t = min(1.0, max(0.0, t))
    pos = t * (len(colors) - 1)
    i = min(len(colors) - 2, int(math.floor(pos)))
    frac = pos - i
    a, b = colors[i], colors[i + 1]
    return tuple(round(a[c] + frac * (b[c] - a[c])) for c in range(3))  # type: ignore[return-value]


def mix(color: Color, other: Color, t: float) -> Color:
    """Blend color toward other by t in [0, 1]."""
    return tuple(round(color[c] + t * (other[c] - color[c])) for c in range(3))  # type: ignore[return-value]


@dataclass(frozen=True)
class VSUPPalette:
    """Per-tier, per-bin color table with built-in suppression.

    ``bins_per_tier`` runs from the most-confident tier down and must be
    strictly decreasing, ending with at least 2 bins.
    """

    tiers: int
    bins_per_tier: tuple[int, ...]
    colors: tuple[tuple[Color, ...], ...]
    diverging: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "bins_per_tier", tuple(int(b) for b in self.bins_per_tier))
        object.__setattr__(
            self,
            "colors",
            tuple(tuple(tuple(int(c) for c in col) for col in tier) for tier in self.colors),
        )
        if self.tiers < 1:
            raise ValueError("palette needs at least one tier")
        if len(self.bins_per_tier) != self.tiers:
            raise ValueError("bins_per_tier length must equal tiers")
        if self.bins_per_tier[-1] < 2:
            raise ValueError("the last tier needs at least 2 bins")
        for a, b in zip(self.bins_per_tier, self.bins_per_tier[1:]):
            if b >= a:
                raise ValueError("bins_per_tier must strictly decrease toward low confidence")
        if len(self.colors) != self.tiers:
            raise ValueError("colors must have one row per tier")
        for t, row in enumerate(self.colors):
            if len(row) != self.bins_per_tier[t]:
                raise ValueError(f"tier {t}: expected {self.bins_per_tier[t]} colors")
            if len(set(row)) != len(row):
                raise ValueError(f"tier {t}: colors must be distinct")
            for col in row:
                if len(col) != 3 or any(not 0 <= c <= 255 for c in col):
                    raise ValueError(f"tier {t}: bad sRGB triple {col}")


def build_palette(
    ramp: tuple[Color, ...],
    tiers: int = 3,
    bins_per_tier: tuple[int, ...] = (8, 4, 2),
    diverging: bool = False,
    neutral: Color = NEUTRAL,
) -> VSUPPalette:
    """Quantize a ramp into a suppression palette.

    Each tier samples the ramp at its bin centers; lower-confidence tiers
    are additionally blended toward a neutral gray, fading detail as
    confidence drops.
    """
    colors = []
    for t in range(tiers):
        bins = bins_per_tier[t]
        fade = t / tiers
        colors.append(
            tuple(mix(sample_ramp(ramp, (b + 0.5) / bins), neutral, fade) for b in range(bins))
        )
    return VSUPPalette(
        tiers=tiers,
        bins_per_tier=tuple(bins_per_tier),
        colors=tuple(colors),
        diverging=diverging,
    )
