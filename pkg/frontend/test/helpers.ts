import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { CellResponse, LayerResponse, TilesetMeta } from "../src/types.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export function loadFixture<T>(name: string): T {
    return JSON.parse(readFileSync(join(FIXTURES, name), "utf-8")) as T;
}

export function recordedMeta(): TilesetMeta {
    return loadFixture<TilesetMeta[]>("tilesets.json")[0];
}

export function recordedLayerR1(): LayerResponse {
    return loadFixture<LayerResponse>("tiles_r1.json");
}

export function recordedLayerR2Bbox(): LayerResponse {
    return loadFixture<LayerResponse>("tiles_r2_bbox.json");
}

export function recordedCell(): CellResponse {
    return loadFixture<CellResponse>("cell.json");
}
