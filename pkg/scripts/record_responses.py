#!/usr/bin/env python3
"""Record real tile-server responses as frontend test fixtures.

Compiles the bundled election dataset, runs the HTTP app in-process, and
dumps selected response bodies under frontend/test/fixtures/. The viewer's
contract tests replay these files, so they exercise the exact payload
shapes the server produces.
"""
from __future__ import annotations

import json
from pathlib import Path

from fastapi.testclient import TestClient

from hexmosaic.config import parse_tileset_config
from hexmosaic.ingest import load_dataset
from hexmosaic.server import create_app
from hexmosaic.tileset import compile_tileset

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "frontend" / "test" / "fixtures"


def main() -> None:
    dataset = load_dataset(
        ROOT / "fixtures" / "election" / "election.geojson",
        ROOT / "fixtures" / "election" / "variables.toml",
    )
    config = parse_tileset_config(ROOT / "fixtures" / "election" / "tileset.toml")
    ts = compile_tileset(dataset, config)
    client = TestClient(create_app({"election": ts}))

    OUT.mkdir(parents=True, exist_ok=True)

    def record(name: str, path: str, params: dict | None = None) -> None:
        response = client.get(path, params=params)
        response.raise_for_status()
        (OUT / name).write_text(json.dumps(response.json(), indent=1, sort_keys=True) + "\n")
        print(f"recorded {name} <- {response.request.url}")

    record("tilesets.json", "/tilesets")
    record("tiles_r1.json", "/tilesets/election/tiles", {"resolution": 1})
    record(
        "tiles_r2_bbox.json",
        "/tilesets/election/tiles",
        {"resolution": 2, "bbox": "-98.7,31.2,-97.6,32.1"},
    )
    layer = client.get("/tilesets/election/tiles", params={"resolution": 2}).json()
    with_icons = [t for t in layer["tiles"] if t["icons"] and t["icons"]["count"] > 0]
    cell = with_icons[0]["cell"] if with_icons else layer["tiles"][0]["cell"]
    record("cell.json", f"/tilesets/election/cell/{cell}")


if __name__ == "__main__":
    main()
