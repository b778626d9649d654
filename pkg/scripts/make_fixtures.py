#!/usr/bin/env python3
"""Generate the bundled synthetic datasets under fixtures/.

Everything is seeded and rounded, so reruns reproduce the committed files
byte for byte. The election-shaped set is a jittered precinct grid with two
urban blobs; the water-shaped set is a valley of demand units plus a
coarser groundwater layer on a different spatial discretization.
"""
from __future__ import annotations

import argparse
import json
import math
import random
from pathlib import Path


def quad(lon0, lat0, dlon, dlat, jitter, rng):
    def j():
        return rng.uniform(-jitter, jitter)

    pts = [
        (lon0 + j(), lat0 + j()),
        (lon0 + dlon + j(), lat0 + j()),
        (lon0 + dlon + j(), lat0 + dlat + j()),
        (lon0 + j(), lat0 + dlat + j()),
    ]
    ring = [[round(x, 6), round(y, 6)] for x, y in pts]
    ring.append(ring[0])
    return [ring]


def feature(fid, coords, props):
    return {
        "type": "Feature",
        "id": fid,
        "geometry": {"type": "Polygon", "coordinates": coords},
        "properties": props,
    }


def gauss(d, scale):
    return math.exp(-((d / scale) ** 2))


def write_json(path: Path, doc) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")
    print(f"wrote {path}")


def make_election(out: Path) -> None:
    rng = random.Random(2024)
    lon_lo, lon_hi = -100.0, -96.0
    lat_lo, lat_hi = 30.0, 33.0
    nx, ny = 12, 10
    dlon = (lon_hi - lon_lo) / nx
    dlat = (lat_hi - lat_lo) / ny
    urban = [(-98.5, 31.6, 0.55), (-97.0, 30.5, 0.65)]

    features = []
    for i in range(nx):
        for j in range(ny):
            lon = lon_lo + i * dlon
            lat = lat_lo + j * dlat
            cx, cy = lon + dlon / 2, lat + dlat / 2
            d = [math.hypot(cx - ux, cy - uy) for ux, uy, _ in urban]
            urban_pull = max(gauss(di, s) for di, (_, _, s) in zip(d, urban))
            density = 30.0 + 4800.0 * urban_pull + rng.uniform(0, 80)
            lead = -28.0 + 95.0 * urban_pull + rng.uniform(-14, 14)
            poc = 22.0 + 55.0 * gauss(d[1], 1.1) + 18.0 * gauss(d[0], 1.2) + rng.uniform(-8, 8)
            features.append(
                feature(
                    f"precinct_{i:02d}_{j:02d}",
                    quad(lon, lat, dlon, dlat, 0.012, rng),
                    {
                        "pct_dem_lead": round(max(-100.0, min(100.0, lead)), 3),
                        "pct_poc": round(max(0.0, min(100.0, poc)), 3),
                        "pop_density": round(max(0.0, min(5000.0, density)), 3),
                    },
                )
            )
    write_json(out / "election" / "election.geojson",
               {"type": "FeatureCollection", "features": features})

    (out / "election" / "variables.toml").write_text(
        """# Variable declarations for the synthetic election-shaped dataset.

[pct_dem_lead]
kind = "intensive"
domain = [-100.0, 100.0]
units_label = "% lead"

[pct_poc]
kind = "intensive"
domain = [0.0, 100.0]
units_label = "%"

[pop_density]
kind = "intensive"
domain = [0.0, 5000.0]
zero_anchored = true
units_label = "people/km^2"
"""
    )
    (out / "election" / "tileset.toml").write_text(
        """name = "election"

[grid]
e0 = 65536.0
max_resolution = 12
resolutions = [1, 3]
z0 = 5.0
delta = 1.5
min_coverage = 0.05

[encoding]
base_color_variable = "pct_dem_lead"
inner_ring_variable = "pct_poc"
icon_variable = "pop_density"
icon_unit = 500.0
icon_max = 9
icon_symbol = "person"
ring_thickness_range = [0.04, 0.16]
icon_opacity_range = [0.3, 1.0]
ring_ramp = "ylgnbu"

[encoding.palette]
ramp = "blue_red"
tiers = 3
bins_per_tier = [8, 4, 2]
diverging = true

[variables]
file = "variables.toml"
"""
    )
    print(f"wrote {out / 'election'} configs")


def make_water(out: Path) -> None:
    rng = random.Random(7331)
    # demand units: two columns of quads along a tilted valley
    features = []
    n_rows = 12
    lat0, dlat = 35.2, 0.4
    for r in range(n_rows):
        lat = lat0 + r * dlat
        center_lon = -119.6 - 0.14 * r  # valley drifts west going north
        for c, (name, width) in enumerate((("w", 0.55), ("e", 0.5))):
            lon = center_lon - width if name == "w" else center_lon
            base_unmet = 1.05 - 0.07 * r + rng.uniform(-0.12, 0.12)
            unmet = max(0.0, min(1.5, base_unmet + (0.18 if name == "e" else 0.0)))
            diff = max(-0.75, min(0.75, 0.4 - 0.06 * r + rng.uniform(-0.2, 0.2)))
            features.append(
                feature(
                    f"du_{r:02d}{name}",
                    quad(lon, lat, width, dlat, 0.015, rng),
                    {
                        "unmet_demand": round(unmet, 3),
                        "demand_baseline_diff": round(diff, 3),
                    },
                )
            )
    write_json(out / "water" / "demand_units.geojson",
               {"type": "FeatureCollection", "features": features})

    # groundwater: coarser, offset discretization over the same valley
    gw = []
    for r in range(6):
        lat = 35.1 + r * 0.85
        center_lon = -119.55 - 0.3 * r
        level = 18.0 + 13.0 * r + rng.uniform(-6, 6)  # deeper water table up north
        gw.append(
            feature(
                f"gw_{r}",
                quad(center_lon - 0.8, lat, 1.7, 0.85, 0.02, rng),
                {"gw_level": round(max(0.0, min(100.0, level)), 3)},
            )
        )
    write_json(out / "water" / "groundwater.geojson",
               {"type": "FeatureCollection", "features": gw})

    (out / "water" / "variables_demand.toml").write_text(
        """[unmet_demand]
kind = "intensive"
domain = [0.0, 1.5]
zero_anchored = true
units_label = "acre-feet/acre"

[demand_baseline_diff]
kind = "intensive"
domain = [-0.75, 0.75]
units_label = "acre-feet/acre vs baseline"
"""
    )
    (out / "water" / "variables_gw.toml").write_text(
        """[gw_level]
kind = "intensive"
domain = [0.0, 100.0]
units_label = "m above datum"
"""
    )
    (out / "water" / "tileset.toml").write_text(
        """name = "water"

[grid]
e0 = 65536.0
max_resolution = 12
resolutions = [1, 3]
z0 = 5.0
delta = 1.5
min_coverage = 0.05

[encoding]
base_color_variable = "gw_level"
inner_ring_variable = "demand_baseline_diff"
icon_variable = "unmet_demand"
icon_unit = 0.15
icon_max = 9
icon_symbol = "droplet"
ring_ramp = "oranges"

[encoding.palette]
ramp = "viridis"
tiers = 3
bins_per_tier = [8, 4, 2]

[variables.unmet_demand]
kind = "intensive"
domain = [0.0, 1.5]
zero_anchored = true
units_label = "acre-feet/acre"

[variables.demand_baseline_diff]
kind = "intensive"
domain = [-0.75, 0.75]
units_label = "acre-feet/acre vs baseline"

[variables.gw_level]
kind = "intensive"
domain = [0.0, 100.0]
units_label = "m above datum"
"""
    )
    print(f"wrote {out / 'water'} configs")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=Path(__file__).resolve().parent.parent / "fixtures")
    args = parser.parse_args()
    out = Path(args.out)
    make_election(out)
    make_water(out)


if __name__ == "__main__":
    main()
