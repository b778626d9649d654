// Tooltip content for a hovered tile: per-variable statistics plus which
// visual channel each variable drives. Built entirely from the tile payload
// (which embeds its aggregates), so it works even when the drill-down
// endpoint is unreachable; parent/children context is added when available.

import type { CellResponse, EncodingData, TilePayload, TilesetMeta } from "./types.js";

export interface TooltipRow {
    variable: string;
    units: string;
    mean: number;
    sigma: number;
    confidence: number;
    coverage: number;
    features: number;
    channel: string | null;
}

export interface TooltipModel {
    cell: string;
    coverage: number;
    rows: TooltipRow[];
    parent: string | null;
    childrenPresent: string[];
}

export function channelOf(variable: string, encoding: EncodingData): string | null {
    if (variable === encoding.base_color_variable) {
        return "base color";
    }
    if (variable === encoding.inner_ring_variable) {
        return "inner ring";
    }
    if (variable === encoding.icon_variable) {
        return "icons";
    }
    if (variable === encoding.height_variable) {
        return "height";
    }
    return null;
}

export function tooltipModel(
    tile: TilePayload, meta: TilesetMeta, drilldown?: CellResponse | null,
): TooltipModel {
    const unitsByName = new Map(meta.variables.map((v) => [v.name, v.units_label]));
    const rows: TooltipRow[] = Object.entries(tile.aggregates).map(([name, agg]) => ({
        variable: name,
        units: unitsByName.get(name) ?? "",
        mean: agg.mean,
        sigma: Math.sqrt(agg.variance),
        confidence: agg.confidence,
        coverage: agg.coverage,
        features: agg.n,
        channel: channelOf(name, meta.encoding),
    }));
    rows.sort((a, b) => a.variable.localeCompare(b.variable));
    return {
        cell: tile.cell,
        coverage: tile.coverage,
        rows,
        parent: drilldown?.parent ?? null,
        childrenPresent: drilldown?.children_present ?? [],
    };
}
