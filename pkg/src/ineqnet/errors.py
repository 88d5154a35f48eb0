"""Exception types shared across the package."""


class IneqnetError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(IneqnetError):
    """Input file is structurally unusable (e.g. wrong CSV header)."""


class UnknownOccupationError(IneqnetError):
    """An occupation label could not be resolved to the closed taxonomy."""


class DegenerateSeriesError(IneqnetError):
    """A series has zero variance where a correlation requires spread."""


class DegenerateMarginError(IneqnetError):
    """A contingency table has an all-zero row or column."""


class ConfigError(IneqnetError):
    """Invalid pipeline or kernel configuration."""


class NoAcceptedRecordsError(IneqnetError):
    """Ingest produced zero usable records."""
