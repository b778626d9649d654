// Icon glyph layout inside a tile: a centered, hex-packed arrangement.
// Offsets are in units of the cell circumradius; the renderer scales them.
// The layout is a viewer choice (the engine only ships counts and opacity).

export type Offset = [number, number];

const RING1_RADIUS = 0.42;
const RING2_RADIUS = 0.72;

function ring(count: number, radius: number, phaseDeg: number): Offset[] {
    const out: Offset[] = [];
    for (let i = 0; i < count; i++) {
        const a = ((phaseDeg + (360 / count) * i) * Math.PI) / 180;
        out.push([radius * Math.cos(a), radius * Math.sin(a)]);
    }
    return out;
}

const SMALL_LAYOUTS: Offset[][] = [
    [],
    [[0, 0]],
    [[-0.22, 0], [0.22, 0]],
    ring(3, 0.26, 90),
    [[-0.22, 0.22], [0.22, 0.22], [-0.22, -0.22], [0.22, -0.22]],
];

export function iconOffsets(count: number): Offset[] {
    if (count < 0) {
        throw new Error(`icon count must be >= 0, got ${count}`);
    }
    if (count < SMALL_LAYOUTS.length) {
        return SMALL_LAYOUTS[count];
    }
    // center, then a ring of 6, then as many as needed on an outer ring
    const positions: Offset[] = [[0, 0], ...ring(6, RING1_RADIUS, 30)];
    if (count > positions.length) {
        positions.push(...ring(count - positions.length, RING2_RADIUS, 0));
    }
    return positions.slice(0, count);
}
