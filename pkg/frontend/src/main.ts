// App wiring: DOM, pan/zoom input, fetch scheduling, tooltip and legend.
// Configured via the query string: ?server=http://host:port&tileset=name
// (defaults: same origin, first listed tileset). An optional
// &basemap=https://host/{z}/{x}/{y}.png template draws raster tiles behind
// the hex layer; without one the plain background keeps the layer legible.

import { TileClient } from "./api.js";
import { LayerController } from "./layer.js";
import { legendModel, highlightFor } from "./legend.js";
import { lonLatToMeters, metersPerPixel, metersToLonLat } from "./mercator.js";
import { paintScene } from "./render.js";
import { buildScene, tileAtScreenPoint, type ViewTransform } from "./scene.js";
import { tooltipModel } from "./tooltip.js";
import type { CellResponse, LonLatBounds, TilePayload, TilesetMeta } from "./types.js";

interface ViewState {
    lon: number;
    lat: number;
    zoom: number;
    hovered: TilePayload | null;
}

const params = new URLSearchParams(window.location.search);
const serverUrl = params.get("server") ?? "";
const basemapTemplate = params.get("basemap");

const canvas = document.getElementById("map") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const tooltipDiv = document.getElementById("tooltip") as HTMLDivElement;
const legendDiv = document.getElementById("legend") as HTMLDivElement;
const bannerDiv = document.getElementById("banner") as HTMLDivElement;
const client = new TileClient(serverUrl);

let meta: TilesetMeta;
let controller: LayerController;
const view: ViewState = { lon: 0, lat: 0, zoom: 6, hovered: null };
const drilldownCache = new Map<string, CellResponse>();

function viewTransform(): ViewTransform {
    const [cx, cy] = lonLatToMeters(view.lon, view.lat);
    return {
        centerX: cx,
        centerY: cy,
        metersPerPixel: metersPerPixel(view.zoom),
        width: canvas.width,
        height: canvas.height,
    };
}

function viewportBounds(): LonLatBounds {
    const t = viewTransform();
    const [lonMin, latMin] = metersToLonLat(
        t.centerX - (t.width / 2) * t.metersPerPixel,
        t.centerY - (t.height / 2) * t.metersPerPixel,
    );
    const [lonMax, latMax] = metersToLonLat(
        t.centerX + (t.width / 2) * t.metersPerPixel,
        t.centerY + (t.height / 2) * t.metersPerPixel,
    );
    return { lonMin, latMin, lonMax, latMax };
}

// -- basemap ------------------------------------------------------------

const basemapTiles = new Map<string, HTMLImageElement>();

function drawBasemap(t: ViewTransform): void {
    if (!basemapTemplate) {
        return;
    }
    const z = Math.round(view.zoom);
    const n = Math.pow(2, z);
    const world = 2 * Math.PI * 6378137;
    const originX = -world / 2;
    const originY = world / 2;
    const tileMeters = world / n;
    const x0 = Math.floor((t.centerX - (t.width / 2) * t.metersPerPixel - originX) / tileMeters);
    const x1 = Math.floor((t.centerX + (t.width / 2) * t.metersPerPixel - originX) / tileMeters);
    const y0 = Math.floor((originY - (t.centerY + (t.height / 2) * t.metersPerPixel)) / tileMeters);
    const y1 = Math.floor((originY - (t.centerY - (t.height / 2) * t.metersPerPixel)) / tileMeters);
    for (let x = x0; x <= x1; x++) {
        for (let y = y0; y <= y1; y++) {
            if (x < 0 || y < 0 || x >= n || y >= n) {
                continue;
            }
            const key = `${z}/${x}/${y}`;
            let img = basemapTiles.get(key);
            if (!img) {
                img = new Image();
                img.crossOrigin = "anonymous";
                img.src = basemapTemplate
                    .replace("{z}", String(z)).replace("{x}", String(x)).replace("{y}", String(y));
                img.onload = () => requestRender();
                img.onerror = () => { /* plain background fallback */ };
                basemapTiles.set(key, img);
            }
            if (img.complete && img.naturalWidth > 0) {
                const px = (originX + x * tileMeters - t.centerX) / t.metersPerPixel + t.width / 2;
                const py = (originY - y * tileMeters - t.centerY) / -t.metersPerPixel + t.height / 2;
                const size = tileMeters / t.metersPerPixel;
                ctx.drawImage(img, px, py, size, size);
            }
        }
    }
}

// -- rendering ----------------------------------------------------------

let renderQueued = false;

function requestRender(): void {
    if (!renderQueued) {
        renderQueued = true;
        requestAnimationFrame(render);
    }
}

function render(): void {
    renderQueued = false;
    const t = viewTransform();
    ctx.fillStyle = "#e8ecef";
    ctx.fillRect(0, 0, canvas.width, canvas.height);
    drawBasemap(t);
    const snapshot = controller.current;
    if (snapshot) {
        const commands = buildScene(snapshot.tiles, t, {
            iconSymbol: meta.encoding.icon_symbol,
            extrusionScale: meta.encoding.height_variable ? 0.5 : 0,
        });
        paintScene(ctx, commands, view.hovered?.cell ?? null);
    }
    bannerDiv.style.display = controller.error ? "block" : "none";
    if (controller.error) {
        bannerDiv.textContent = `tile fetch failed: ${controller.error} (showing last layer)`;
    }
    renderLegend();
}

// -- legend and tooltip ---------------------------------------------------

function renderLegend(): void {
    const model = legendModel(meta);
    const hl = view.hovered ? highlightFor(view.hovered) : null;
    const rows = model.tiers
        .map((tier) => {
            const cells = tier.colors
                .map((c, b) => {
                    const on = hl !== null && hl.tier === tier.tier && hl.bin === b;
                    return `<span class="swatch${on ? " hl" : ""}" style="background:${c}"></span>`;
                })
                .join("");
            return `<div class="tier-row" data-tier="${tier.tier}">` +
                `<span class="conf">${tier.confidenceMin.toFixed(2)}&ndash;${tier.confidenceMax.toFixed(2)}</span>${cells}</div>`;
        })
        .join("");
    const ring = model.ringRamp
        .map((c) => `<span class="swatch" style="background:${c}"></span>`)
        .join("");
    legendDiv.innerHTML =
        `<div class="legend-title">${model.baseVariable.name} (${model.baseVariable.units_label})` +
        ` by confidence</div>${rows}` +
        `<div class="legend-title">ring: ${model.ringVariable.name} (${model.ringVariable.units_label})</div>` +
        `<div class="tier-row">${ring}</div>` +
        `<div class="legend-title">1 ${model.iconSymbol} = ${model.iconUnit} ${model.iconVariable.units_label}` +
        ` (${model.iconVariable.name}, max ${model.iconMax})</div>`;
}

function renderTooltip(evt: MouseEvent | null): void {
    if (!evt || !view.hovered) {
        tooltipDiv.style.display = "none";
        return;
    }
    const model = tooltipModel(view.hovered, meta, drilldownCache.get(view.hovered.cell));
    const rows = model.rows
        .map(
            (r) =>
                `<tr><td>${r.variable}${r.channel ? ` <em>(${r.channel})</em>` : ""}</td>` +
                `<td>${r.mean.toPrecision(4)} ${r.units}</td>` +
                `<td>&sigma; ${r.sigma.toPrecision(3)}</td>` +
                `<td>conf ${r.confidence.toFixed(2)}</td>` +
                `<td>cov ${r.coverage.toFixed(2)}</td></tr>`,
        )
        .join("");
    const kids = model.childrenPresent.length
        ? `<div class="kids">${model.childrenPresent.length} finer tiles inside</div>`
        : "";
    tooltipDiv.innerHTML =
        `<div class="cell-id">${model.cell}</div><table>${rows}</table>${kids}`;
    tooltipDiv.style.display = "block";
    tooltipDiv.style.left = `${evt.clientX + 14}px`;
    tooltipDiv.style.top = `${evt.clientY + 14}px`;
}

// -- input ----------------------------------------------------------------

let fetchTimer: number | undefined;

function scheduleFetch(): void {
    window.clearTimeout(fetchTimer);
    fetchTimer = window.setTimeout(() => {
        void controller.onViewChange(view.zoom, viewportBounds()).then(requestRender);
    }, 120);
}

function attachInput(): void {
    let dragging = false;
    let lastX = 0;
    let lastY = 0;
    canvas.addEventListener("pointerdown", (evt) => {
        dragging = true;
        lastX = evt.clientX;
        lastY = evt.clientY;
        canvas.setPointerCapture(evt.pointerId);
    });
    canvas.addEventListener("pointerup", (evt) => {
        dragging = false;
        canvas.releasePointerCapture(evt.pointerId);
    });
    canvas.addEventListener("pointermove", (evt) => {
        if (dragging) {
            const mpp = metersPerPixel(view.zoom);
            const [cx, cy] = lonLatToMeters(view.lon, view.lat);
            const [lon, lat] = metersToLonLat(
                cx - (evt.clientX - lastX) * mpp,
                cy + (evt.clientY - lastY) * mpp,
            );
            view.lon = lon;
            view.lat = lat;
            lastX = evt.clientX;
            lastY = evt.clientY;
            scheduleFetch();
            requestRender();
            return;
        }
        const snapshot = controller.current;
        const rect = canvas.getBoundingClientRect();
        const hovered = snapshot
            ? tileAtScreenPoint(
                  snapshot.tiles, evt.clientX - rect.left, evt.clientY - rect.top, viewTransform(),
              )
            : null;
        if (hovered?.cell !== view.hovered?.cell) {
            view.hovered = hovered;
            if (hovered && !drilldownCache.has(hovered.cell)) {
                client
                    .fetchCell(meta.name, hovered.cell)
                    .then((resp) => {
                        drilldownCache.set(hovered.cell, resp);
                        renderTooltip(evt);
                    })
                    .catch(() => { /* tooltip falls back to cached channel values */ });
            }
            requestRender();
        }
        renderTooltip(hovered ? evt : null);
    });
    canvas.addEventListener("pointerleave", () => {
        view.hovered = null;
        renderTooltip(null);
        requestRender();
    });
    canvas.addEventListener(
        "wheel",
        (evt) => {
            evt.preventDefault();
            view.zoom = Math.min(18, Math.max(2, view.zoom - evt.deltaY / 480));
            scheduleFetch();
            requestRender();
        },
        { passive: false },
    );
    window.addEventListener("resize", () => {
        sizeCanvas();
        scheduleFetch();
        requestRender();
    });
}

function sizeCanvas(): void {
    canvas.width = window.innerWidth;
    canvas.height = window.innerHeight;
}

// -- startup ----------------------------------------------------------------

async function start(): Promise<void> {
    sizeCanvas();
    const tilesets = await client.listTilesets();
    if (tilesets.length === 0) {
        bannerDiv.textContent = "server has no tilesets loaded";
        bannerDiv.style.display = "block";
        return;
    }
    const wanted = params.get("tileset");
    meta = tilesets.find((t) => t.name === wanted) ?? tilesets[0];
    controller = new LayerController(meta, async (resolution, bbox) => {
        const layer = await client.fetchLayer(meta.name, resolution, bbox);
        return layer.tiles;
    });

    // center on the data: mean of a coarse layer's tile centers
    const coarse = await client.fetchLayer(meta.name, meta.resolutions[0]);
    if (coarse.tiles.length) {
        view.lon =
            coarse.tiles.reduce((s, t) => s + t.center_lonlat[0], 0) / coarse.tiles.length;
        view.lat =
            coarse.tiles.reduce((s, t) => s + t.center_lonlat[1], 0) / coarse.tiles.length;
    }
    view.zoom = meta.zoom_policy.z0 + 0.5;
    attachInput();
    await controller.onViewChange(view.zoom, viewportBounds());
    requestRender();
}

start().catch((err) => {
    bannerDiv.textContent = `viewer failed to start: ${err}`;
    bannerDiv.style.display = "block";
});
