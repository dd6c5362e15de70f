"""qperc: entanglement percolation in small-world quantum networks."""

from .graph import (
    DegenerateDegreesError,
    DegreeStats,
    Edge,
    EdgeState,
    EntangledGraph,
    GraphParseError,
    analytic_threshold,
    degree_stats,
    parse,
    scp,
    serialize,
)
from .generators import (
    GeneratorSpec,
    generate_er,
    generate_kleinberg,
    generate_ring_regular,
    generate_square_lattice,
    generate_ws,
)
from .preprocess import SwapReport, qswap_directed, qswap_undirected, walk_rewrite

__version__ = "0.1.0"

__all__ = [
    "DegenerateDegreesError",
    "DegreeStats",
    "Edge",
    "EdgeState",
    "EntangledGraph",
    "GeneratorSpec",
    "GraphParseError",
    "SwapReport",
    "analytic_threshold",
    "degree_stats",
    "generate_er",
    "generate_kleinberg",
    "generate_ring_regular",
    "generate_square_lattice",
    "generate_ws",
    "parse",
    "qswap_directed",
    "qswap_undirected",
    "scp",
    "serialize",
    "walk_rewrite",
    "__version__",
]
