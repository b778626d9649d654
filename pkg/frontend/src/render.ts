// Canvas painter: executes scene commands in order. Kept free of any layer
// or fetch logic so the contract-tested modules stay DOM-free.

import type { SceneCommand } from "./scene.js";

function tracePolygon(ctx: CanvasRenderingContext2D, points: [number, number][]): void {
    ctx.beginPath();
    ctx.moveTo(points[0][0], points[0][1]);
    for (let i = 1; i < points.length; i++) {
        ctx.lineTo(points[i][0], points[i][1]);
    }
    ctx.closePath();
}

function drawGlyph(
    ctx: CanvasRenderingContext2D,
    x: number, y: number, r: number, symbol: string,
): void {
    ctx.beginPath();
    if (symbol === "droplet") {
        // teardrop: circle plus a point above
        ctx.moveTo(x, y - 1.6 * r);
        ctx.quadraticCurveTo(x + 1.1 * r, y - 0.3 * r, x + 0.9 * r, y + 0.35 * r);
        ctx.arc(x, y + 0.2 * r, 0.95 * r, 0.1 * Math.PI, 0.9 * Math.PI);
        ctx.quadraticCurveTo(x - 1.1 * r, y - 0.3 * r, x, y - 1.6 * r);
    } else if (symbol === "person") {
        ctx.arc(x, y - 0.8 * r, 0.55 * r, 0, 2 * Math.PI);
        ctx.moveTo(x, y - 0.2 * r);
        ctx.ellipse(x, y + 0.55 * r, 0.8 * r, r, 0, Math.PI, 2 * Math.PI);
    } else {
        ctx.arc(x, y, r, 0, 2 * Math.PI);
    }
    ctx.fill();
}

const GLYPH_COLORS: Record<string, string> = {
    droplet: "#c0262c",
    person: "#1a1a2e",
    dot: "#222222",
};

export function paintScene(
    ctx: CanvasRenderingContext2D,
    commands: SceneCommand[],
    hoveredCell: string | null,
): void {
    for (const cmd of commands) {
        switch (cmd.kind) {
            case "extrusion": {
                ctx.fillStyle = cmd.fillStyle;
                for (let i = 0; i < cmd.base.length; i++) {
                    const j = (i + 1) % cmd.base.length;
                    ctx.beginPath();
                    ctx.moveTo(cmd.base[i][0], cmd.base[i][1]);
                    ctx.lineTo(cmd.base[j][0], cmd.base[j][1]);
                    ctx.lineTo(cmd.top[j][0], cmd.top[j][1]);
                    ctx.lineTo(cmd.top[i][0], cmd.top[i][1]);
                    ctx.closePath();
                    ctx.fill();
                }
                break;
            }
            case "hex": {
                tracePolygon(ctx, cmd.points);
                if (cmd.fillStyle) {
                    ctx.fillStyle = cmd.fillStyle;
                    ctx.fill();
                }
                ctx.strokeStyle =
                    hoveredCell === cmd.cell ? "#000000" : "rgba(40,40,40,0.35)";
                ctx.lineWidth = hoveredCell === cmd.cell ? 2.5 : 0.75;
                ctx.stroke();
                break;
            }
            case "ring": {
                tracePolygon(ctx, cmd.points);
                ctx.strokeStyle = cmd.strokeStyle;
                ctx.lineWidth = Math.max(0.5, cmd.lineWidth);
                ctx.stroke();
                break;
            }
            case "icon": {
                ctx.save();
                ctx.globalAlpha = cmd.opacity;
                ctx.fillStyle = GLYPH_COLORS[cmd.symbol] ?? GLYPH_COLORS.dot;
                drawGlyph(ctx, cmd.x, cmd.y, cmd.radius, cmd.symbol);
                ctx.restore();
                break;
            }
        }
    }
}
