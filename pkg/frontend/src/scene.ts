// Pure scene building: tiles plus a view transform in, draw commands out.
// The canvas painter consumes the commands verbatim, so everything the
// contract tests need to see (counts, colors, sizes) is inspectable here
// without a DOM.

import { iconOffsets } from "./icons.js";
import { rgbCss, type TilePayload } from "./types.js";

export interface ViewTransform {
    centerX: number;        // meters
    centerY: number;        // meters
    metersPerPixel: number;
    width: number;          // pixels
    height: number;         // pixels
}

export function metersToScreen(
    x: number, y: number, view: ViewTransform,
): [number, number] {
    return [
        view.width / 2 + (x - view.centerX) / view.metersPerPixel,
        view.height / 2 - (y - view.centerY) / view.metersPerPixel,
    ];
}

export function screenToMeters(
    px: number, py: number, view: ViewTransform,
): [number, number] {
    return [
        view.centerX + (px - view.width / 2) * view.metersPerPixel,
        view.centerY - (py - view.height / 2) * view.metersPerPixel,
    ];
}

export interface HexFill {
    kind: "hex";
    cell: string;
    points: [number, number][];
    fillStyle: string | null;
}

export interface RingStroke {
    kind: "ring";
    cell: string;
    points: [number, number][];
    strokeStyle: string;
    lineWidth: number;      // pixels = thickness fraction * circumradius
}

export interface IconGlyph {
    kind: "icon";
    cell: string;
    x: number;
    y: number;
    radius: number;
    opacity: number;
    symbol: string;
}

export interface Extrusion {
    kind: "extrusion";
    cell: string;
    base: [number, number][];
    top: [number, number][];
    fillStyle: string;
}

export type SceneCommand = HexFill | RingStroke | IconGlyph | Extrusion;

export interface SceneOptions {
    iconSymbol: string;
    // vertical pixels per meter of tile height (pseudo-3D lift); 0 disables
    extrusionScale?: number;
}

function inset(
    points: [number, number][], center: [number, number], factor: number,
): [number, number][] {
    return points.map(([x, y]) => [
        center[0] + (x - center[0]) * factor,
        center[1] + (y - center[1]) * factor,
    ]);
}

export function buildTileCommands(
    tile: TilePayload, view: ViewTransform, options: SceneOptions,
): SceneCommand[] {
    const commands: SceneCommand[] = [];
    const screenVerts = tile.vertices.map(([x, y]) => metersToScreen(x, y, view));
    const screenCenter = metersToScreen(tile.center[0], tile.center[1], view);
    const circumradiusPx = tile.edge_length / view.metersPerPixel;

    const lift =
        tile.height !== null && options.extrusionScale
            ? tile.height * options.extrusionScale / view.metersPerPixel
            : 0;
    const top: [number, number][] = lift
        ? screenVerts.map(([x, y]) => [x, y - lift])
        : screenVerts;

    if (lift) {
        const side = tile.base
            ? rgbCss([
                  Math.round(tile.base.color[0] * 0.6),
                  Math.round(tile.base.color[1] * 0.6),
                  Math.round(tile.base.color[2] * 0.6),
              ])
            : "rgb(96,96,96)";
        commands.push({
            kind: "extrusion",
            cell: tile.cell,
            base: screenVerts,
            top,
            fillStyle: side,
        });
    }

    commands.push({
        kind: "hex",
        cell: tile.cell,
        points: top,
        fillStyle: tile.base ? rgbCss(tile.base.color) : null,
    });

    if (tile.ring) {
        const topCenter: [number, number] = [screenCenter[0], screenCenter[1] - lift];
        commands.push({
            kind: "ring",
            cell: tile.cell,
            points: inset(top, topCenter, 1 - tile.ring.thickness * 1.5),
            strokeStyle: rgbCss(tile.ring.color),
            lineWidth: tile.ring.thickness * circumradiusPx,
        });
    }

    if (tile.icons && tile.icons.count > 0) {
        for (const [ox, oy] of iconOffsets(tile.icons.count)) {
            commands.push({
                kind: "icon",
                cell: tile.cell,
                x: screenCenter[0] + ox * circumradiusPx,
                y: screenCenter[1] - lift - oy * circumradiusPx,
                radius: 0.12 * circumradiusPx,
                opacity: tile.icons.opacity,
                symbol: options.iconSymbol,
            });
        }
    }
    return commands;
}

export function buildScene(
    tiles: TilePayload[], view: ViewTransform, options: SceneOptions,
): SceneCommand[] {
    const commands: SceneCommand[] = [];
    for (const tile of tiles) {
        commands.push(...buildTileCommands(tile, view, options));
    }
    return commands;
}

// Hit test for hover: the cell whose hexagon contains the screen point.
export function tileAtScreenPoint(
    tiles: TilePayload[], px: number, py: number, view: ViewTransform,
): TilePayload | null {
    const [mx, my] = screenToMeters(px, py, view);
    for (const tile of tiles) {
        if (pointInConvexPolygon(mx, my, tile.vertices)) {
            return tile;
        }
    }
    return null;
}

function pointInConvexPolygon(x: number, y: number, verts: [number, number][]): boolean {
    let sign = 0;
    for (let i = 0; i < verts.length; i++) {
        const [ax, ay] = verts[i];
        const [bx, by] = verts[(i + 1) % verts.length];
        const cross = (bx - ax) * (y - ay) - (by - ay) * (x - ax);
        if (cross !== 0) {
            const s = cross > 0 ? 1 : -1;
            if (sign === 0) {
                sign = s;
            } else if (s !== sign) {
                return false;
            }
        }
    }
    return true;
}
