"""Command line interface: compile, inspect, serve, validate.

Exit codes: 0 success, 1 user error (bad arguments, bad files, absent
cells), 2 internal error.
"""
from __future__ import annotations

import argparse
import json
import sys
import traceback

from .config import parse_inline_variables, parse_tileset_config
from .errors import HexMosaicError, IndexParseError
from .hexgrid import format_index, parse_index
from .ingest import load_dataset
from .tileset import (
    compile_tileset,
    config_problems,
    load_tileset,
    meta_to_dict,
    save_tileset,
    tile_to_record,
)


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on usage errors; this CLI promises 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hexmosaic", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="compile a dataset into a tileset file")
    p.add_argument("geo", help="GeoJSON feature collection (lon/lat polygons)")
    p.add_argument("spec", help="variable declaration file (TOML)")
    p.add_argument("config", help="tileset config file (TOML)")
    p.add_argument("-o", "--out", required=True, help="output tileset path (.hxt)")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("inspect", help="print tileset meta, or one cell's record")
    p.add_argument("tileset", help="tileset file (.hxt)")
    p.add_argument("--cell", help="cell index, e.g. r5:3:-2")
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("serve", help="serve tilesets over HTTP")
    p.add_argument("tilesets", nargs="+", help="tileset files (.hxt)")
    p.add_argument("--port", type=int, default=8008)
    p.add_argument("--bind", default="127.0.0.1")
    p.add_argument("--no-cors", action="store_true", help="disable permissive CORS")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("validate", help="check a tileset config file")
    p.add_argument("config", help="tileset config file (TOML)")
    p.set_defaults(func=cmd_validate)

    return parser


def cmd_compile(args) -> int:
    dataset = load_dataset(args.geo, args.spec)
    config = parse_tileset_config(args.config)
    ts = compile_tileset(dataset, config)
    save_tileset(ts, args.out)
    total = sum(ts.meta.tile_counts.values())
    r_min, r_max = ts.meta.resolutions
    print(f"compiled {ts.meta.name}: resolutions {r_min}..{r_max}, {total} tiles")
    print(f"content_hash {ts.meta.content_hash}")
    print(f"wrote {args.out}")
    return 0


def cmd_inspect(args) -> int:
    ts = load_tileset(args.tileset)
    if args.cell is None:
        print(json.dumps(meta_to_dict(ts.meta), indent=2, sort_keys=True))
        return 0
    try:
        cell = parse_index(args.cell)
    except IndexParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for tile in ts.tiles.get(cell.resolution, ()):
        if tile.cell == cell:
            print(json.dumps(tile_to_record(tile), indent=2, sort_keys=True))
            return 0
    print(f"no tile {format_index(cell)} in {ts.meta.name}", file=sys.stderr)
    return 1


def cmd_serve(args) -> int:
    from .server import run_server

    tilesets = {}
    for path in args.tilesets:
        ts = load_tileset(path)
        name = ts.meta.name
        if name in tilesets:
            print(f"error: duplicate tileset name {name!r} ({path})", file=sys.stderr)
            return 1
        tilesets[name] = ts
        print(f"loaded {name} from {path} ({sum(ts.meta.tile_counts.values())} tiles)")
    try:
        run_server(tilesets, bind=args.bind, port=args.port, cors=not args.no_cors)
    except KeyboardInterrupt:
        pass
    return 0


def cmd_validate(args) -> int:
    config = parse_tileset_config(args.config)
    variables = parse_inline_variables(args.config)
    variable_map = None if variables is None else {v.name: v for v in variables}
    problems = config_problems(config, variable_map)
    if problems:
        for problem in problems:
            print(f"problem: {problem}", file=sys.stderr)
        return 1
    scope = "config only" if variable_map is None else f"{len(variable_map)} variables"
    print(f"{args.config}: valid ({scope})")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (HexMosaicError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception:
        traceback.print_exc()
        return 2


if __name__ == "__main__":
    sys.exit(main())
