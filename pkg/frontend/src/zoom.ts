import type { TilesetMeta } from "./types.js";

// Grid resolution for a map zoom level, clamped to the tileset's range.
// Mirrors the server's zoom policy: r_min + floor((zoom - z0) / delta).
export function resolutionForZoom(zoom: number, meta: TilesetMeta): number {
    const [rMin, rMax] = meta.resolutions;
    const { z0, delta } = meta.zoom_policy;
    const r = rMin + Math.floor((zoom - z0) / delta);
    return Math.min(rMax, Math.max(rMin, r));
}
