// Zoom-driven layer management. One LayerController owns what the renderer
// may draw: a single immutable snapshot (resolution + tiles) that is swapped
// atomically when a fetch for the *latest* request lands. Stale responses
// are dropped, so no frame can mix resolutions and rapid zooming settles on
// the layer matching the final zoom.

import { resolutionForZoom } from "./zoom.js";
import type { LonLatBounds, TilePayload, TilesetMeta } from "./types.js";

export interface LayerSnapshot {
    resolution: number;
    tiles: TilePayload[];
}

export type LayerFetcher = (
    resolution: number, bbox: LonLatBounds,
) => Promise<TilePayload[]>;

function padBounds(b: LonLatBounds, factor: number): LonLatBounds {
    const dLon = (b.lonMax - b.lonMin) * (factor - 1) / 2;
    const dLat = (b.latMax - b.latMin) * (factor - 1) / 2;
    return {
        lonMin: b.lonMin - dLon,
        latMin: b.latMin - dLat,
        lonMax: b.lonMax + dLon,
        latMax: b.latMax + dLat,
    };
}

function contains(outer: LonLatBounds, inner: LonLatBounds): boolean {
    return (
        outer.lonMin <= inner.lonMin &&
        outer.latMin <= inner.latMin &&
        outer.lonMax >= inner.lonMax &&
        outer.latMax >= inner.latMax
    );
}

export class LayerController {
    private snapshot: LayerSnapshot | null = null;
    private fetchedBounds: LonLatBounds | null = null;
    private latestToken = 0;
    private swapCount = 0;
    private requestCount = 0;
    private lastError: string | null = null;

    constructor(
        private readonly meta: TilesetMeta,
        private readonly fetcher: LayerFetcher,
        // viewports are fetched with padding so panning inside the fetched
        // region costs no requests
        private readonly padFactor = 1.6,
    ) {}

    get current(): LayerSnapshot | null {
        return this.snapshot;
    }

    get error(): string | null {
        return this.lastError;
    }

    get stats(): { swaps: number; requests: number } {
        return { swaps: this.swapCount, requests: this.requestCount };
    }

    targetResolution(zoom: number): number {
        return resolutionForZoom(zoom, this.meta);
    }

    // Called on every pan/zoom settle. Fetches only when the resolution
    // changes or the viewport escapes the already-fetched region.
    async onViewChange(zoom: number, viewport: LonLatBounds): Promise<void> {
        const resolution = this.targetResolution(zoom);
        const sameLayer =
            this.snapshot !== null && this.snapshot.resolution === resolution;
        if (sameLayer && this.fetchedBounds && contains(this.fetchedBounds, viewport)) {
            return;
        }
        const bounds = padBounds(viewport, this.padFactor);
        const token = ++this.latestToken;
        this.requestCount++;
        let tiles: TilePayload[];
        try {
            tiles = await this.fetcher(resolution, bounds);
        } catch (err) {
            if (token === this.latestToken) {
                // keep the stale layer visible; surface the failure
                this.lastError = err instanceof Error ? err.message : String(err);
            }
            return;
        }
        if (token !== this.latestToken) {
            return; // superseded while in flight
        }
        this.lastError = null;
        this.fetchedBounds = bounds;
        this.snapshot = { resolution, tiles };
        this.swapCount++;
    }
}
