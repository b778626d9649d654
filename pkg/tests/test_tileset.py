"""Compilation, zoom policy, the on-disk format, and config parsing."""
import json
import math
from pathlib import Path

import pytest

import dsets
from hexmosaic.config import parse_inline_variables, parse_tileset_config
from hexmosaic.encode import EncodingConfig, encode_record
from hexmosaic.errors import ConfigError, CorruptTilesetError, UnsupportedVersionError
from hexmosaic.hexgrid import HexIndex
from hexmosaic.tileset import (
    TileSetMeta,
    TilesetConfig,
    canonical_json,
    compile_tileset,
    compute_content_hash,
    load_tileset,
    meta_from_dict,
    meta_to_dict,
    resolution_for_zoom,
    save_tileset,
    tile_from_record,
    tile_to_record,
)

from conftest import make_dataset, rect, var

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def toy_dataset():
    """Four features, three variables, compact extent."""
    c = dsets.target_center()
    s = 1800.0
    feats = []
    values = [(0, 0, 20.0), (1, 0, 40.0), (0, 1, 70.0), (1, 1, 90.0)]
    for i, j, v in values:
        feats.append(
            (
                f"f{i}{j}",
                rect(c.x - s + i * s, c.y - s + j * s, c.x + i * s, c.y + j * s),
                {"value_a": v, "value_b": 100.0 - v, "value_c": v / 50.0},
            )
        )
    return make_dataset(
        feats,
        [
            var("value_a", 0.0, 100.0),
            var("value_b", 0.0, 100.0),
            var("value_c", 0.0, 2.0, zero_anchored=True),
        ],
    )


def toy_config(**kw):
    defaults = dict(
        encoding=EncodingConfig(
            base_color_variable="value_a",
            inner_ring_variable="value_b",
            icon_variable="value_c",
            icon_unit=0.15,
        ),
        name="toy",
        e0=1000.0,
        max_resolution=6,
        resolutions=(1, 3),
        z0=6.0,
        delta=1.5,
        min_coverage=0.05,
    )
    defaults.update(kw)
    return TilesetConfig(**defaults)


class TestCanonicalJson:
    def test_sorted_keys_and_17g_floats(self):
        s = canonical_json({"b": 0.04, "a": 1, "c": [True, None, "x"]})
        assert s == '{"a":1,"b":0.040000000000000001,"c":[true,null,"x"]}'

    def test_floats_round_trip_exactly(self):
        for x in (0.04, 1.0 / 3.0, 70.0, -0.0, 6.02e23, 5e-324):
            assert json.loads(canonical_json({"x": x}))["x"] == x

    def test_integral_floats_stay_floats(self):
        assert canonical_json(70.0) == "70.0"
        assert isinstance(json.loads(canonical_json(70.0)), float)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            canonical_json(math.inf)


class TestCompile:
    def test_three_layers_and_stable_hash(self):
        ds = toy_dataset()
        ts1 = compile_tileset(ds, toy_config())
        ts2 = compile_tileset(ds, toy_config())
        assert sorted(ts1.tiles) == [1, 2, 3]
        assert all(ts1.tiles[r] for r in (1, 2, 3))
        assert ts1.meta.content_hash == ts2.meta.content_hash

    def test_uniform_dataset_tiles_identical_channels(self):
        ds = make_dataset(
            [("u", rect(-2500, -2500, 2500, 2500),
              {"value_a": 30.0, "value_b": 60.0, "value_c": 0.6})],
            [
                var("value_a", 0.0, 100.0),
                var("value_b", 0.0, 100.0),
                var("value_c", 0.0, 2.0, zero_anchored=True),
            ],
        )
        ts = compile_tileset(ds, toy_config(resolutions=(2, 2), min_coverage=0.999))
        tiles = ts.tiles[2]
        assert len(tiles) > 3
        channels = {
            (t.base_tier, t.base_bin, t.base_color, t.ring_color, t.ring_thickness,
             t.icon_count, t.icon_opacity)
            for t in tiles
        }
        assert len(channels) == 1

    def test_min_coverage_filter_monotone(self):
        ds = toy_dataset()
        counts = {}
        for mc in (0.05, 0.1, 0.2, 0.4, 0.8):
            ts = compile_tileset(ds, toy_config(min_coverage=mc))
            counts[mc] = {r: len(layer) for r, layer in ts.tiles.items()}
        thresholds = sorted(counts)
        for lo, hi in zip(thresholds, thresholds[1:]):
            for r in counts[lo]:
                assert counts[hi][r] <= counts[lo][r]

    def test_every_kept_tile_meets_coverage(self):
        ts = compile_tileset(toy_dataset(), toy_config(min_coverage=0.3))
        for layer in ts.tiles.values():
            for tile in layer:
                assert tile.coverage_fraction >= 0.3

    def test_config_problems_enumerated(self):
        ds = toy_dataset()
        bad = toy_config(
            resolutions=(5, 2),
            delta=-1.0,
            encoding=EncodingConfig(
                base_color_variable="ghost",
                inner_ring_variable="value_b",
                icon_variable="value_b",
                icon_unit=-3.0,
            ),
        )
        with pytest.raises(ConfigError) as err:
            compile_tileset(ds, bad)
        text = "\n".join(err.value.problems)
        assert len(err.value.problems) >= 4
        for needle in ("resolution range", "delta", "ghost", "distinct", "icon_unit"):
            assert needle in text

    def test_empty_tileset_is_valid_with_warning(self, caplog, tmp_path):
        # a feature far smaller than any resolution-1 cell: coverage stays tiny
        ds = make_dataset(
            [("dot", rect(0, 0, 10, 10), {"value_a": 5.0, "value_b": 5.0, "value_c": 0.1})],
            [
                var("value_a", 0.0, 100.0),
                var("value_b", 0.0, 100.0),
                var("value_c", 0.0, 2.0, zero_anchored=True),
            ],
        )
        with caplog.at_level("WARNING"):
            ts = compile_tileset(ds, toy_config(min_coverage=0.5, resolutions=(1, 1)))
        assert "empty tileset" in caplog.text
        assert all(len(layer) == 0 for layer in ts.tiles.values())
        p = tmp_path / "empty.hxt"
        save_tileset(ts, p)
        assert load_tileset(p).meta.content_hash == ts.meta.content_hash

    def test_sorted_unique_cells_per_layer(self):
        ts = compile_tileset(toy_dataset(), toy_config())
        for layer in ts.tiles.values():
            cells = [t.cell for t in layer]
            assert cells == sorted(set(cells), key=lambda h: (h.q, h.r))

    def test_hierarchical_consistency_of_compiled_tiles(self):
        """Interior parents' base means match the area-weighted child means.

        Children are congruent, so cell-area weighting is a plain average.
        """
        ds, grid, _, _ = dsets.gradient_strips()
        ts = compile_tileset(ds, toy_config(resolutions=(1, 2), min_coverage=0.999))
        by_cell = {t.cell: t for layer in ts.tiles.values() for t in layer}
        checked = 0
        for tile in ts.tiles[1]:
            kids = [by_cell.get(k) for k in grid.children(tile.cell)]
            if any(k is None for k in kids):
                continue
            child_mean = sum(
                k.aggregates.per_variable["value_a"].weighted_mean for k in kids
            ) / 7.0
            parent_mean = tile.aggregates.per_variable["value_a"].weighted_mean
            assert parent_mean == pytest.approx(child_mean, rel=0.02)
            checked += 1
        assert checked >= 2

    def test_no_orphan_channels(self):
        """Channel values are reproducible from each tile's embedded aggregates."""
        ds = toy_dataset()
        cfg = toy_config()
        ts = compile_tileset(ds, cfg)
        grid = ts.meta.grid()
        variables = {v.name: v for v in ts.meta.variables}
        for layer in ts.tiles.values():
            for tile in layer:
                redone = encode_record(tile.aggregates, cfg.encoding, variables, grid)
                assert redone == tile


class TestZoomPolicy:
    def _meta(self, r_min=1, r_max=3, z0=6.0, delta=1.5):
        ts = compile_tileset(toy_dataset(), toy_config())
        return meta_from_dict(
            {
                **meta_to_dict(ts.meta),
                "resolutions": [r_min, r_max],
                "zoom_policy": {"z0": z0, "delta": delta},
            }
        )

    def test_z0_maps_to_r_min(self):
        assert resolution_for_zoom(6.0, self._meta()) == 1

    def test_full_span_maps_to_r_max(self):
        meta = self._meta()
        assert resolution_for_zoom(6.0 + 1.5 * (3 - 1), meta) == 3

    def test_default_example(self):
        meta = self._meta(r_min=0, r_max=8)
        assert resolution_for_zoom(9.0, meta) == 0 + 2

    def test_table_against_formula(self):
        meta = self._meta()
        r_min, r_max = meta.resolutions
        z0, delta = meta.zoom_policy
        for i in range(20):
            z = -2.0 + i * 1.01
            want = min(r_max, max(r_min, r_min + math.floor((z - z0) / delta)))
            assert resolution_for_zoom(z, meta) == want


class TestPersistence:
    def test_round_trip_equality(self, tmp_path):
        ts = compile_tileset(toy_dataset(), toy_config())
        p = tmp_path / "toy.hxt"
        save_tileset(ts, p)
        loaded = load_tileset(p)
        assert loaded.meta == ts.meta
        assert loaded.tiles == ts.tiles
        assert loaded == ts

    def test_save_is_byte_deterministic(self, tmp_path):
        ts = compile_tileset(toy_dataset(), toy_config())
        p1, p2 = tmp_path / "a.hxt", tmp_path / "b.hxt"
        save_tileset(ts, p1)
        save_tileset(ts, p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_reserialized_load_keeps_hash(self, tmp_path):
        """Parsing and re-serializing reproduces the identical hash."""
        ts = compile_tileset(toy_dataset(), toy_config())
        p = tmp_path / "toy.hxt"
        save_tileset(ts, p)
        loaded = load_tileset(p)
        assert compute_content_hash(loaded) == ts.meta.content_hash

    def test_truncated_file_is_corruption_not_crash(self, tmp_path):
        ts = compile_tileset(toy_dataset(), toy_config())
        p = tmp_path / "toy.hxt"
        save_tileset(ts, p)
        lines = p.read_text().splitlines()
        (tmp_path / "trunc.hxt").write_text("\n".join(lines[:-5]) + "\n")
        with pytest.raises(CorruptTilesetError, match="truncated"):
            load_tileset(tmp_path / "trunc.hxt")

    def test_flipped_byte_fails_hash(self, tmp_path):
        ts = compile_tileset(toy_dataset(), toy_config())
        p = tmp_path / "toy.hxt"
        save_tileset(ts, p)
        text = p.read_text().replace('"mean":2', '"mean":3', 1)
        (tmp_path / "bad.hxt").write_text(text)
        with pytest.raises(CorruptTilesetError):
            load_tileset(tmp_path / "bad.hxt")

    def test_unsupported_version(self, tmp_path):
        ts = compile_tileset(toy_dataset(), toy_config())
        p = tmp_path / "toy.hxt"
        save_tileset(ts, p)
        lines = p.read_text().splitlines()
        lines[0] = "HEXT 99"
        (tmp_path / "v99.hxt").write_text("\n".join(lines) + "\n")
        with pytest.raises(UnsupportedVersionError):
            load_tileset(tmp_path / "v99.hxt")

    def test_not_a_tileset(self, tmp_path):
        p = tmp_path / "nope.hxt"
        p.write_text("something else entirely\n")
        with pytest.raises(CorruptTilesetError):
            load_tileset(p)

    def test_created_at_not_hashed(self, tmp_path):
        ts = compile_tileset(toy_dataset(), toy_config())
        meta2 = meta_from_dict({**meta_to_dict(ts.meta), "created_at": "2001-01-01T00:00:00+00:00"})
        from hexmosaic.tileset import TileSet

        assert compute_content_hash(TileSet(meta2, ts.tiles)) == ts.meta.content_hash

    def test_tile_record_round_trip(self):
        ts = compile_tileset(toy_dataset(), toy_config())
        tile = ts.tiles[2][0]
        rec = json.loads(canonical_json(tile_to_record(tile)))
        assert tile_from_record(rec) == tile

    def test_meta_dict_round_trip(self):
        ts = compile_tileset(toy_dataset(), toy_config())
        d = json.loads(canonical_json(meta_to_dict(ts.meta)))
        assert meta_from_dict(d) == ts.meta


class TestConfigFiles:
    def test_parse_election_config(self):
        cfg = parse_tileset_config(FIXTURES / "election" / "tileset.toml")
        assert cfg.name == "election"
        assert cfg.resolutions == (1, 3)
        assert cfg.encoding.base_color_variable == "pct_dem_lead"
        assert cfg.encoding.palette.diverging
        assert cfg.encoding.icon_unit == 500.0

    def test_variables_file_reference(self):
        specs = parse_inline_variables(FIXTURES / "election" / "tileset.toml")
        assert specs is not None
        assert {v.name for v in specs} == {"pct_dem_lead", "pct_poc", "pop_density"}

    def test_inline_variables(self):
        specs = parse_inline_variables(FIXTURES / "water" / "tileset.toml")
        assert specs is not None
        assert {v.name for v in specs} == {"unmet_demand", "demand_baseline_diff", "gw_level"}

    def test_unknown_ramp_reported(self, tmp_path):
        p = tmp_path / "bad.toml"
        p.write_text(
            """
[encoding]
base_color_variable = "a"
inner_ring_variable = "b"
icon_variable = "c"
ring_ramp = "sparkle"
"""
        )
        with pytest.raises(ConfigError, match="sparkle"):
            parse_tileset_config(p)

    def test_missing_encoding_table(self, tmp_path):
        p = tmp_path / "empty.toml"
        p.write_text("[grid]\ne0 = 1000.0\n")
        with pytest.raises(ConfigError, match="encoding"):
            parse_tileset_config(p)

    def test_malformed_toml(self, tmp_path):
        p = tmp_path / "broken.toml"
        p.write_text("[grid\ne0 = ")
        with pytest.raises(ConfigError):
            parse_tileset_config(p)
