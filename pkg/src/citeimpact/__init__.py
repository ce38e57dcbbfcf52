"""Multi-dimensional citation impact indicators over large citation graphs."""

from citeimpact.graph import (
    CitationGraph,
    MetadataConflict,
    ParseError,
    PublicationMeta,
    ValidationReport,
    build_graph,
    load_graph,
    read_edges,
    read_meta,
)
from citeimpact.indicators import (
    INDICATOR_NAMES,
    CiterProfile,
    IndicatorRecord,
    batch_compute,
    citer_profile,
    compute_indicators,
    profile_distribution,
)

__all__ = [
    "CitationGraph",
    "CiterProfile",
    "INDICATOR_NAMES",
    "IndicatorRecord",
    "MetadataConflict",
    "ParseError",
    "PublicationMeta",
    "ValidationReport",
    "batch_compute",
    "build_graph",
    "citer_profile",
    "compute_indicators",
    "load_graph",
    "profile_distribution",
    "read_edges",
    "read_meta",
]

__version__ = "0.1.0"
