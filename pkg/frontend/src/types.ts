// Payload shapes as served by the tile service. The viewer never computes
// aggregates or colors itself: every number and color shown on screen
// originates from these objects.

export type RGB = [number, number, number];

export interface VariableSpec {
    name: string;
    kind: "intensive" | "extensive";
    domain: [number, number];
    zero_anchored: boolean;
    density_weight_of: string | null;
    units_label: string;
    sigma_ref: number | null;
}

export interface PaletteData {
    tiers: number;
    bins_per_tier: number[];
    diverging: boolean;
    colors: RGB[][];
}

export interface EncodingData {
    base_color_variable: string;
    inner_ring_variable: string;
    icon_variable: string;
    height_variable: string | null;
    icon_unit: number;
    icon_max: number;
    icon_symbol: string;
    ring_thickness_range: [number, number];
    icon_opacity_range: [number, number];
    ring_ramp: RGB[];
    palette: PaletteData;
    height_max: number;
    height_reference_resolution: number;
}

export interface TilesetMeta {
    name: string;
    projection_id: string;
    resolutions: [number, number];
    zoom_policy: { z0: number; delta: number };
    variables: VariableSpec[];
    encoding: EncodingData;
    grid: { e0: number; max_resolution: number };
    min_coverage: number;
    tile_counts: Record<string, number>;
    created_at: string;
    content_hash: string;
}

export interface VariableAggregate {
    mean: number;
    variance: number;
    confidence: number;
    coverage: number;
    n: number;
}

export interface TilePayload {
    cell: string;
    center: [number, number];
    vertices: [number, number][];
    center_lonlat: [number, number];
    vertices_lonlat: [number, number][];
    edge_length: number;
    base: { tier: number; bin: number; color: RGB } | null;
    ring: { color: RGB; thickness: number } | null;
    icons: { count: number; opacity: number } | null;
    height: number | null;
    coverage: number;
    clamped: string[];
    aggregates: Record<string, VariableAggregate>;
}

export interface LayerResponse {
    tileset: string;
    resolution: number;
    count: number;
    tiles: TilePayload[];
}

export interface CellResponse {
    tile: TilePayload;
    parent: string | null;
    children_present: string[];
}

export interface LonLatBounds {
    lonMin: number;
    latMin: number;
    lonMax: number;
    latMax: number;
}

export function cellResolution(cell: string): number {
    const m = /^r(\d+):(-?\d+):(-?\d+)$/.exec(cell);
    if (!m) {
        throw new Error(`bad cell index: ${cell}`);
    }
    return parseInt(m[1], 10);
}

export function rgbCss(c: RGB, alpha = 1): string {
    return alpha >= 1 ? `rgb(${c[0]},${c[1]},${c[2]})` : `rgba(${c[0]},${c[1]},${c[2]},${alpha})`;
}
