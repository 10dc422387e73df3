"""triperc - critical site percolation on the triangular lattice."""

__version__ = "0.1.0"

from .errors import (
    ArgumentError,
    ConfigError,
    DomainError,
    NumericError,
    RangeError,
    RecordError,
    TripercError,
)
from .lattice import DomainKind, DomainSpec, SiteCoord
