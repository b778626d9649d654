import type { CellResponse, LayerResponse, LonLatBounds, TilesetMeta } from "./types.js";

export class TileClient {
    constructor(private readonly baseUrl: string) {}

    private async get<T>(path: string): Promise<T> {
        const response = await fetch(`${this.baseUrl}${path}`);
        if (!response.ok) {
            throw new Error(`${path}: HTTP ${response.status}`);
        }
        return response.json() as Promise<T>;
    }

    listTilesets(): Promise<TilesetMeta[]> {
        return this.get("/tilesets");
    }

    fetchLayer(name: string, resolution: number, bbox?: LonLatBounds): Promise<LayerResponse> {
        let path = `/tilesets/${encodeURIComponent(name)}/tiles?resolution=${resolution}`;
        if (bbox) {
            path += `&bbox=${bbox.lonMin},${bbox.latMin},${bbox.lonMax},${bbox.latMax}`;
        }
        return this.get(path);
    }

    fetchCell(name: string, cell: string): Promise<CellResponse> {
        return this.get(`/tilesets/${encodeURIComponent(name)}/cell/${cell}`);
    }
}
