"""graphled: linked engineering document graphs.

Ingests OCR-extracted document sets, disambiguates noisy entity values,
models everything as a property graph, answers completeness/conformance/
traceability inspections, and benchmarks its own graph store.
"""

__version__ = "0.1.0"

from .disambiguation import FilterConfig, disambiguate
from .graphstore import PropertyGraph, TraversalQuery, build_graph
from .ingest import DocumentSet, parse_loader_json

__all__ = [
    "FilterConfig",
    "DocumentSet",
    "PropertyGraph",
    "TraversalQuery",
    "build_graph",
    "disambiguate",
    "parse_loader_json",
    "__version__",
]
