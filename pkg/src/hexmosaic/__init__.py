"""Hexagonal tiling engine for multivariate polygonal data.

Pipeline: load polygonal features (ingest) -> spatially-weighted per-cell
statistics on a hierarchical hex grid (hexgrid, geometry, aggregate) ->
visual channel encoding with value-suppressing palettes (encode) ->
compiled multi-resolution tilesets (tileset) -> HTTP serving (server).
"""

from .aggregate import (
    AggregateRecord,
    VariableAggregate,
    WeightEntry,
    aggregate_cell,
    aggregate_resolution,
    confidence,
    weighted_mean,
    weighted_variance,
    weights_for_cell,
)
from .encode import (
    EncodedTile,
    EncodingConfig,
    encode_record,
    icon_count,
    icon_opacity,
    ring_attributes,
    vsup_bin,
)
from .errors import (
    ConfigError,
    CorruptTilesetError,
    DatasetValidationError,
    GeoParseError,
    HexMosaicError,
    HierarchyExhaustedError,
    IndexParseError,
    MergeError,
    ResolutionRangeError,
    RootHasNoParentError,
    UnsupportedVersionError,
)
from .geometry import (
    PolygonGeometry,
    Ring,
    clip_ring_to_hex,
    intersection_area,
    point_in_ring,
    polygon_area,
    ring_area,
)
from .hexgrid import HexCell, HexGrid, HexIndex, ProjectedPoint, format_index, parse_index
from .ingest import Dataset, Feature, VariableSpec, load_dataset, merge_datasets
from .palettes import RAMPS, VSUPPalette, build_palette, sample_ramp
from .projection import WEB_MERCATOR, Projection, get_projection
from .server import create_app
from .tileset import (
    TileSet,
    TileSetMeta,
    TilesetConfig,
    compile_tileset,
    load_tileset,
    resolution_for_zoom,
    save_tileset,
)

__version__ = "0.1.0"
