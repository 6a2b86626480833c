"""pharmaharvest: polite multi-source acquisition of adverse-event counts."""

from .core_types import (
    CountMatrix,
    CountRecord,
    DatasetManifest,
    DrugQuery,
    ManifestEntry,
    SourceDescriptor,
    SourceId,
    TwoByTwo,
)

__version__ = "0.1.0"

__all__ = [
    "CountMatrix",
    "CountRecord",
    "DatasetManifest",
    "DrugQuery",
    "ManifestEntry",
    "SourceDescriptor",
    "SourceId",
    "TwoByTwo",
    "__version__",
]
