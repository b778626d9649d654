"""Exception types shared across the package."""


class HexMosaicError(Exception):
    """Base class for all errors raised by this package."""


class ResolutionRangeError(HexMosaicError, ValueError):
    """A resolution outside the grid's configured [0, max_resolution] range."""


class HierarchyExhaustedError(HexMosaicError, ValueError):
    """children() requested at the finest configured resolution."""


class RootHasNoParentError(HexMosaicError, ValueError):
    """parent() requested at resolution 0."""


class IndexParseError(HexMosaicError, ValueError):
    """A textual cell index that does not match ``r{res}:{q}:{r}``."""


class ProjectionError(HexMosaicError, ValueError):
    """Coordinates outside the projection's valid extent, or non-finite."""


class DatasetError(HexMosaicError):
    """Base class for ingest failures."""


class GeoParseError(DatasetError):
    """Malformed geometry input file."""


class SpecParseError(DatasetError):
    """Malformed variable-spec file."""


class DatasetValidationError(DatasetError):
    """Input data violates the declared variable specs."""


class MergeError(DatasetError):
    """Two datasets cannot be merged (projection, variable, or id clash)."""


class ConfigError(HexMosaicError):
    """Invalid tileset/encoding configuration.

    Carries the full list of problems so callers can report them all at once.
    """

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class TilesetIOError(HexMosaicError):
    """Base class for tileset persistence failures."""


class UnsupportedVersionError(TilesetIOError):
    """Tileset file written by an unknown format version."""


class CorruptTilesetError(TilesetIOError):
    """Tileset file failed structural or hash verification."""
