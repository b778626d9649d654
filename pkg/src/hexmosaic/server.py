"""Read-only HTTP service over compiled tilesets.

All state is loaded before the app starts and never mutated, so any number
of concurrent readers are safe and every response is a pure function of the
request. Responses are serialized with sorted keys and compact separators,
making identical requests byte-identical, and carry an ETag derived from
the tileset content hash.

Tile geometry is shipped both in projected meters and in lon/lat so thin
clients never need projection code; the optional ``bbox`` filter on the
tiles endpoint is therefore also interpreted as lon/lat
(``bbox=lon1,lat1,lon2,lat2``) and matches tiles by center containment.
"""
from __future__ import annotations

import json
from typing import Mapping

from fastapi import FastAPI, HTTPException, Response
from fastapi.middleware.cors import CORSMiddleware

from .encode import EncodedTile
from .errors import IndexParseError
from .hexgrid import format_index, parse_index
from .projection import get_projection
from .tileset import TileSet, meta_to_dict, tile_to_record


def tile_payload(tile: EncodedTile, inverse) -> dict:
    """Tile record extended with lon/lat geometry for projection-free clients."""
    rec = tile_to_record(tile)
    cx, cy = tile.boundary.center
    rec["center_lonlat"] = list(inverse(cx, cy))
    rec["vertices_lonlat"] = [list(inverse(v.x, v.y)) for v in tile.boundary.vertices]
    return rec


def _json_response(payload, etag: str) -> Response:
    body = json.dumps(payload, separators=(",", ":"), sort_keys=True)
    return Response(
        content=body,
        media_type="application/json",
        headers={"ETag": f'"{etag}"', "Cache-Control": "public, max-age=3600"},
    )


class _Served:
    """Per-tileset request-ready payloads, built once at startup."""

    def __init__(self, ts: TileSet):
        self.tileset = ts
        inverse = get_projection(ts.meta.projection_id).inverse
        self.layers: dict[int, list[dict]] = {
            res: [tile_payload(t, inverse) for t in layer]
            for res, layer in ts.tiles.items()
        }
        self.by_cell: dict[str, dict] = {
            rec["cell"]: rec for layer in self.layers.values() for rec in layer
        }


def create_app(tilesets: Mapping[str, TileSet], cors: bool = True) -> FastAPI:
    """Build the service over a fixed set of named tilesets."""
    app = FastAPI(title="hexmosaic tile server")
    if cors:
        app.add_middleware(
            CORSMiddleware, allow_origins=["*"], allow_methods=["GET"], allow_headers=["*"]
        )
    served = {name: _Served(ts) for name, ts in sorted(tilesets.items())}
    all_hash = ",".join(s.tileset.meta.content_hash for s in served.values())

    def _get(name: str) -> _Served:
        s = served.get(name)
        if s is None:
            raise HTTPException(status_code=404, detail=f"no tileset named {name!r}")
        return s

    @app.get("/tilesets")
    def list_tilesets() -> Response:
        payload = [meta_to_dict(s.tileset.meta) for s in served.values()]
        return _json_response(payload, all_hash)

    @app.get("/tilesets/{name}/tiles")
    def layer(name: str, resolution: int, bbox: str | None = None) -> Response:
        s = _get(name)
        meta = s.tileset.meta
        r_min, r_max = meta.resolutions
        if not r_min <= resolution <= r_max:
            raise HTTPException(
                status_code=400,
                detail=f"resolution {resolution} outside [{r_min}, {r_max}]",
            )
        tiles = s.layers.get(resolution, [])
        if bbox is not None:
            try:
                lon1, lat1, lon2, lat2 = (float(v) for v in bbox.split(","))
            except ValueError:
                raise HTTPException(
                    status_code=400, detail="bbox must be lon1,lat1,lon2,lat2"
                ) from None
            lon_lo, lon_hi = min(lon1, lon2), max(lon1, lon2)
            lat_lo, lat_hi = min(lat1, lat2), max(lat1, lat2)
            tiles = [
                t
                for t in tiles
                if lon_lo <= t["center_lonlat"][0] <= lon_hi
                and lat_lo <= t["center_lonlat"][1] <= lat_hi
            ]
        payload = {
            "tileset": name,
            "resolution": resolution,
            "count": len(tiles),
            "tiles": tiles,
        }
        return _json_response(payload, s.tileset.meta.content_hash)

    @app.get("/tilesets/{name}/cell/{index}")
    def cell(name: str, index: str) -> Response:
        s = _get(name)
        try:
            h = parse_index(index)
        except IndexParseError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        rec = s.by_cell.get(format_index(h))
        if rec is None:
            raise HTTPException(status_code=404, detail=f"no tile for cell {index}")
        meta = s.tileset.meta
        grid = meta.grid()
        parent = format_index(grid.parent(h)) if h.resolution > 0 else None
        children_present: list[str] = []
        if h.resolution < min(meta.resolutions[1], grid.max_resolution):
            present = {r["cell"] for r in s.layers.get(h.resolution + 1, [])}
            children_present = [
                key for key in map(format_index, grid.children(h)) if key in present
            ]
        payload = {
            "tile": rec,
            "parent": parent,
            "children_present": children_present,
        }
        return _json_response(payload, meta.content_hash)

    return app


def run_server(
    tilesets: Mapping[str, TileSet],
    bind: str = "127.0.0.1",
    port: int = 8008,
    cors: bool = True,
) -> None:
    """Serve until interrupted."""
    import uvicorn

    uvicorn.run(create_app(tilesets, cors=cors), host=bind, port=port, log_level="info")
