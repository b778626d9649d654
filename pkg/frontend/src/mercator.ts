// Minimal spherical-Mercator math for anchoring the viewport. Tile geometry
// arrives pre-projected from the server; this is only needed to convert the
// view center (lon/lat) into plane meters and to size a zoom level.

const EARTH_RADIUS_M = 6378137;
const TILE_SIZE = 256;

export function lonLatToMeters(lon: number, lat: number): [number, number] {
    const x = EARTH_RADIUS_M * (lon * Math.PI / 180);
    const y = EARTH_RADIUS_M * Math.log(Math.tan(Math.PI / 4 + (lat * Math.PI / 180) / 2));
    return [x, y];
}

export function metersToLonLat(x: number, y: number): [number, number] {
    const lon = (x / EARTH_RADIUS_M) * 180 / Math.PI;
    const lat = (2 * Math.atan(Math.exp(y / EARTH_RADIUS_M)) - Math.PI / 2) * 180 / Math.PI;
    return [lon, lat];
}

// Mercator-plane meters per screen pixel at a zoom level. Uniform across the
// plane (ground distortion is the projection's, not the screen's).
export function metersPerPixel(zoom: number): number {
    return (2 * Math.PI * EARTH_RADIUS_M) / (TILE_SIZE * Math.pow(2, zoom));
}
