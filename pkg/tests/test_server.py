"""HTTP surface: listing, layer fetch with bbox, drill-down, cache validators."""
import json

import pytest
from fastapi.testclient import TestClient

from hexmosaic.hexgrid import format_index, parse_index
from hexmosaic.server import create_app
from hexmosaic.tileset import compile_tileset, meta_to_dict

from test_tileset import toy_config, toy_dataset


@pytest.fixture(scope="module")
def tileset():
    return compile_tileset(toy_dataset(), toy_config())


@pytest.fixture(scope="module")
def client(tileset):
    return TestClient(create_app({"toy": tileset}))


class TestListTilesets:
    def test_one_loaded(self, client, tileset):
        r = client.get("/tilesets")
        assert r.status_code == 200
        body = r.json()
        assert len(body) == 1
        assert body[0] == meta_to_dict(tileset.meta)

    def test_zero_loaded(self):
        r = TestClient(create_app({})).get("/tilesets")
        assert r.status_code == 200
        assert r.json() == []


class TestTilesEndpoint:
    def test_full_layer_count_matches_file(self, client, tileset):
        r = client.get("/tilesets/toy/tiles", params={"resolution": 2})
        assert r.status_code == 200
        body = r.json()
        assert body["count"] == len(tileset.tiles[2])
        assert len(body["tiles"]) == body["count"]

    def test_geometry_in_both_coordinate_systems(self, client):
        tile = client.get("/tilesets/toy/tiles", params={"resolution": 1}).json()["tiles"][0]
        assert len(tile["vertices"]) == 6
        assert len(tile["vertices_lonlat"]) == 6
        lon, lat = tile["center_lonlat"]
        assert -180 <= lon <= 180 and -86 <= lat <= 86

    def test_bbox_covering_nothing(self, client):
        r = client.get(
            "/tilesets/toy/tiles", params={"resolution": 2, "bbox": "120,40,121,41"}
        )
        assert r.status_code == 200
        assert r.json()["tiles"] == []

    def test_bbox_equals_client_side_filter(self, client):
        full = client.get("/tilesets/toy/tiles", params={"resolution": 2}).json()["tiles"]
        lons = sorted(t["center_lonlat"][0] for t in full)
        lats = sorted(t["center_lonlat"][1] for t in full)
        bbox = (lons[1], lats[1], lons[-2], lats[-2])
        got = client.get(
            "/tilesets/toy/tiles",
            params={"resolution": 2, "bbox": ",".join(str(v) for v in bbox)},
        ).json()["tiles"]
        want = [
            t
            for t in full
            if bbox[0] <= t["center_lonlat"][0] <= bbox[2]
            and bbox[1] <= t["center_lonlat"][1] <= bbox[3]
        ]
        assert got == want

    def test_unknown_tileset_404(self, client):
        assert client.get("/tilesets/nope/tiles", params={"resolution": 2}).status_code == 404

    def test_resolution_out_of_range_400_names_range(self, client):
        r = client.get("/tilesets/toy/tiles", params={"resolution": 9})
        assert r.status_code == 400
        assert "[1, 3]" in r.json()["detail"]

    def test_malformed_bbox_400(self, client):
        r = client.get("/tilesets/toy/tiles", params={"resolution": 2, "bbox": "a,b"})
        assert r.status_code == 400

    def test_byte_identical_repeat_requests(self, client):
        a = client.get("/tilesets/toy/tiles", params={"resolution": 3})
        b = client.get("/tilesets/toy/tiles", params={"resolution": 3})
        assert a.content == b.content

    def test_statelessness_under_interleaving(self, client):
        before = client.get("/tilesets/toy/tiles", params={"resolution": 1}).content
        client.get("/tilesets/toy/tiles", params={"resolution": 2, "bbox": "0,0,1,1"})
        client.get("/tilesets/toy/cell/r1:0:0")
        after = client.get("/tilesets/toy/tiles", params={"resolution": 1}).content
        assert before == after

    def test_etag_from_content_hash(self, client, tileset):
        r = client.get("/tilesets/toy/tiles", params={"resolution": 2})
        assert tileset.meta.content_hash in r.headers["etag"]


class TestCellEndpoint:
    def test_drilldown_fields(self, client, tileset):
        cell = tileset.tiles[2][0].cell
        key = format_index(cell)
        r = client.get(f"/tilesets/toy/cell/{key}")
        assert r.status_code == 200
        body = r.json()
        assert body["tile"]["cell"] == key
        assert body["tile"]["aggregates"]
        assert body["parent"].startswith("r1:")

    def test_children_subset_of_next_layer(self, client, tileset):
        grid = tileset.meta.grid()
        cell = tileset.tiles[2][0].cell
        body = client.get(f"/tilesets/toy/cell/{format_index(cell)}").json()
        next_layer = {format_index(t.cell) for t in tileset.tiles[3]}
        kids = body["children_present"]
        assert kids, "an interior covered cell has covered children"
        assert set(kids) <= next_layer
        assert set(kids) <= {format_index(k) for k in grid.children(cell)}

    def test_parent_round_trip(self, client, tileset):
        grid = tileset.meta.grid()
        cell = tileset.tiles[3][5].cell
        body = client.get(f"/tilesets/toy/cell/{format_index(cell)}").json()
        parent = parse_index(body["parent"])
        assert cell in grid.children(parent)

    def test_absent_cell_404(self, client):
        assert client.get("/tilesets/toy/cell/r2:900:900").status_code == 404

    def test_malformed_index_400(self, client):
        assert client.get("/tilesets/toy/cell/r5:3").status_code == 400

    def test_finest_resolution_has_no_children_listed(self, client, tileset):
        cell = tileset.tiles[3][0].cell
        body = client.get(f"/tilesets/toy/cell/{format_index(cell)}").json()
        assert body["children_present"] == []


def test_meta_matches_cli_inspect_output(tmp_path, tileset):
    """The list endpoint and `inspect` print the same meta, field for field."""
    from hexmosaic.cli import main
    from hexmosaic.tileset import save_tileset

    p = tmp_path / "toy.hxt"
    save_tileset(tileset, p)
    import io
    from contextlib import redirect_stdout

    buf = io.StringIO()
    with redirect_stdout(buf):
        assert main(["inspect", str(p)]) == 0
    via_cli = json.loads(buf.getvalue())
    via_http = TestClient(create_app({"toy": tileset})).get("/tilesets").json()[0]
    assert via_cli == via_http
