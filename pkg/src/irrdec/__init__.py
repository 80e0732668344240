"""Locally irregular decompositions: randomized labelings, risky-edge
classification, Local Lemma resampling, degree-constrained factors, the
three-part pipeline, exact small-graph oracles, and the constants audit."""

__version__ = "0.1.0"

from .graph_core import (
    Decomposition,
    Graph,
    generate,
    is_locally_irregular,
    is_locally_irregular_decomposition,
    parse_edge_list,
    recognize_exception,
    serialize_edge_list,
)

__all__ = [
    "Decomposition",
    "Graph",
    "__version__",
    "generate",
    "is_locally_irregular",
    "is_locally_irregular_decomposition",
    "parse_edge_list",
    "recognize_exception",
    "serialize_edge_list",
]
