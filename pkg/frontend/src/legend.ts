// Legend model, generated purely from tileset meta: one row of value-bin
// swatches per confidence tier for the base channel, the ring ramp, and the
// icon unit line. Layout is the DOM's job; this module owns the content.

import { rgbCss, type TilesetMeta, type VariableSpec } from "./types.js";

export interface LegendTier {
    tier: number;
    confidenceMin: number;
    confidenceMax: number;
    colors: string[];
}

export interface LegendModel {
    baseVariable: VariableSpec;
    ringVariable: VariableSpec;
    iconVariable: VariableSpec;
    tiers: LegendTier[];
    ringRamp: string[];
    iconUnit: number;
    iconSymbol: string;
    iconMax: number;
}

function variableByName(meta: TilesetMeta, name: string): VariableSpec {
    const spec = meta.variables.find((v) => v.name === name);
    if (!spec) {
        throw new Error(`tileset meta has no variable ${name}`);
    }
    return spec;
}

export function legendModel(meta: TilesetMeta): LegendModel {
    const { encoding } = meta;
    const palette = encoding.palette;
    const tiers: LegendTier[] = palette.colors.map((row, t) => ({
        tier: t,
        // tier t covers confidence in (1 - (t+1)/tiers, 1 - t/tiers]
        confidenceMin: 1 - (t + 1) / palette.tiers,
        confidenceMax: 1 - t / palette.tiers,
        colors: row.map((c) => rgbCss(c)),
    }));
    return {
        baseVariable: variableByName(meta, encoding.base_color_variable),
        ringVariable: variableByName(meta, encoding.inner_ring_variable),
        iconVariable: variableByName(meta, encoding.icon_variable),
        tiers,
        ringRamp: encoding.ring_ramp.map((c) => rgbCss(c)),
        iconUnit: encoding.icon_unit,
        iconSymbol: encoding.icon_symbol,
        iconMax: encoding.icon_max,
    };
}

// Which legend swatch a hovered tile occupies, for highlighting.
export function highlightFor(
    tile: { base: { tier: number; bin: number } | null },
): { tier: number; bin: number } | null {
    return tile.base ? { tier: tile.base.tier, bin: tile.base.bin } : null;
}
