"""Core multigraph with entanglement-carrying edges.

Nodes are dense integer ids. Every edge holds an entanglement state that is
either a pure partially entangled pair, parameterized by its larger Schmidt
weight lambda1, or the mixed product of an entanglement swap, parameterized
directly by its singlet conversion probability (SCP). The module also
provides degree statistics, the configuration-model percolation threshold,
and a line-oriented text format for graphs.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

# Edge provenance tags.
TAG_LATTICE = "lattice"
TAG_LONG_RANGE = "long-range"
TAG_REWIRED = "rewired"
TAG_SWAP_PRODUCT = "swap-product"
TAG_WALK_CHORD = "walk-chord"
EDGE_TAGS = (TAG_LATTICE, TAG_LONG_RANGE, TAG_REWIRED, TAG_SWAP_PRODUCT, TAG_WALK_CHORD)

# Per-node eligibility flags for swap pre-processing.
ELIGIBLE = 0
MEASURED = 1
SWAP_NEIGHBOR = 2
_FLAG_NAMES = {MEASURED: "measured", SWAP_NEIGHBOR: "swap-neighbor"}
_FLAG_VALUES = {v: k for k, v in _FLAG_NAMES.items()}

PURE = "pure"
SWAPPED = "swapped"


class GraphParseError(ValueError):
    """Malformed graph file; carries the 1-based line number."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class DegenerateDegreesError(ValueError):
    """Degree moments admit no percolation transition (mean_k2 <= mean_k)."""


@dataclass(frozen=True)
class EdgeState:
    """Entanglement state of one edge: pure(lambda1) or swapped(scp).

    For a pure state, ``value`` is the larger Schmidt weight lambda1 in
    [0.5, 1.0]. For a swapped state, ``value`` is the SCP it inherited
    from the pure states it was built from, in [0, 1].
    """

    kind: str
    value: float

    def __post_init__(self):
        if self.kind == PURE:
            if not 0.5 <= self.value <= 1.0:
                raise ValueError(f"pure state needs lambda1 in [0.5, 1], got {self.value}")
        elif self.kind == SWAPPED:
            if not 0.0 <= self.value <= 1.0:
                raise ValueError(f"swapped state needs scp in [0, 1], got {self.value}")
        else:
            raise ValueError(f"unknown edge state kind {self.kind!r}")

    @classmethod
    def pure(cls, lambda1: float) -> "EdgeState":
        return cls(PURE, float(lambda1))

    @classmethod
    def swapped(cls, scp_value: float) -> "EdgeState":
        return cls(SWAPPED, float(scp_value))

    @property
    def is_pure(self) -> bool:
        return self.kind == PURE


def scp(state: EdgeState) -> float:
    """Singlet conversion probability of an edge state.

    A pure pair with larger Schmidt weight lambda1 converts to a singlet
    with probability min(1, 2(1 - lambda1)); a swapped edge carries its
    SCP directly.
    """
    if state.kind == PURE:
        return min(1.0, 2.0 * (1.0 - state.value))
    return state.value


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    state: EdgeState
    tag: str


class EntangledGraph:
    """Multigraph whose edges carry entanglement states.

    Undirected edges are stored once with u < v. Parallel edges are
    permitted and kept distinct; self-loops are rejected. ``node_flags``
    records swap bookkeeping (eligible / measured / swap-neighbor) and
    ``ghz_edges`` holds three-party hyper-edges produced by the
    quantum-walk rewrite in GHZ mode, as (u, v, w, scp) tuples.

    Graphs should be treated as read-only once built; the rewrite
    operations in :mod:`qperc.preprocess` work on private copies.
    """

    def __init__(self, node_count: int, directed: bool = False):
        if node_count <= 0:
            raise ValueError("node_count must be positive")
        self.node_count = int(node_count)
        self.directed = bool(directed)
        self.edges: list[Edge] = []
        self.node_flags = np.zeros(self.node_count, dtype=np.int8)
        self.ghz_edges: list[tuple[int, int, int, float]] = []

    def _check_node(self, u: int):
        if not 0 <= u < self.node_count:
            raise ValueError(f"node id {u} out of range [0, {self.node_count})")

    def add_edge(self, u: int, v: int, state: EdgeState, tag: str = TAG_LATTICE):
        self._check_node(u)
        self._check_node(v)
        if u == v:
            raise ValueError(f"self-loop on node {u} rejected")
        if tag not in EDGE_TAGS:
            raise ValueError(f"unknown edge tag {tag!r}")
        if not self.directed and u > v:
            u, v = v, u
        self.edges.append(Edge(u, v, state, tag))

    def add_ghz_edge(self, u: int, v: int, w: int, scp_value: float):
        for x in (u, v, w):
            self._check_node(x)
        if len({u, v, w}) != 3:
            raise ValueError("GHZ hyper-edge needs three distinct nodes")
        self.ghz_edges.append((u, v, w, float(scp_value)))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        """Per-node degree; for directed graphs this is in + out."""
        deg = np.zeros(self.node_count, dtype=np.int64)
        for e in self.edges:
            deg[e.u] += 1
            deg[e.v] += 1
        return deg

    def in_degrees(self) -> np.ndarray:
        if not self.directed:
            raise ValueError("in_degrees on undirected graph")
        deg = np.zeros(self.node_count, dtype=np.int64)
        for e in self.edges:
            deg[e.v] += 1
        return deg

    def out_degrees(self) -> np.ndarray:
        if not self.directed:
            raise ValueError("out_degrees on undirected graph")
        deg = np.zeros(self.node_count, dtype=np.int64)
        for e in self.edges:
            deg[e.u] += 1
        return deg

    def active_node_count(self) -> int:
        """Nodes still part of the network: everything except measured
        nodes that have lost all their edges."""
        measured = np.flatnonzero(self.node_flags == MEASURED)
        if measured.size == 0:
            return self.node_count
        deg = self.degrees()
        return self.node_count - int(np.count_nonzero(deg[measured] == 0))

    def incident(self) -> list[list[int]]:
        """Edge-index lists per node (both endpoints, any direction)."""
        inc: list[list[int]] = [[] for _ in range(self.node_count)]
        for i, e in enumerate(self.edges):
            inc[e.u].append(i)
            inc[e.v].append(i)
        return inc

    def edge_multiset(self) -> Counter:
        return Counter((e.u, e.v, e.state.kind, e.state.value, e.tag) for e in self.edges)

    def copy(self) -> "EntangledGraph":
        g = EntangledGraph(self.node_count, self.directed)
        g.edges = list(self.edges)
        g.node_flags = self.node_flags.copy()
        g.ghz_edges = list(self.ghz_edges)
        return g

    def __eq__(self, other) -> bool:
        if not isinstance(other, EntangledGraph):
            return NotImplemented
        return (
            self.node_count == other.node_count
            and self.directed == other.directed
            and self.edge_multiset() == other.edge_multiset()
            and np.array_equal(self.node_flags, other.node_flags)
            and sorted(self.ghz_edges) == sorted(other.ghz_edges)
        )


@dataclass(frozen=True)
class DegreeStats:
    """Degree histogram and first two moments.

    For directed graphs, ``histogram``/``mean_k``/``mean_k2`` describe the
    total degree (in + out) and ``in_stats``/``out_stats`` hold the
    per-direction statistics.
    """

    histogram: dict[int, int]
    mean_k: float
    mean_k2: float
    in_stats: "DegreeStats | None" = None
    out_stats: "DegreeStats | None" = None


def _stats_from_degrees(deg: np.ndarray) -> DegreeStats:
    values, counts = np.unique(deg, return_counts=True)
    hist = {int(k): int(c) for k, c in zip(values, counts)}
    n = deg.size
    mean_k = float(np.sum(values * counts) / n)
    mean_k2 = float(np.sum(values.astype(np.float64) ** 2 * counts) / n)
    return DegreeStats(hist, mean_k, mean_k2)


def degree_stats(g: EntangledGraph) -> DegreeStats:
    """Degree histogram over every node, plus <k> and <k^2>."""
    total = _stats_from_degrees(g.degrees())
    if not g.directed:
        return total
    return DegreeStats(
        total.histogram,
        total.mean_k,
        total.mean_k2,
        in_stats=_stats_from_degrees(g.in_degrees()),
        out_stats=_stats_from_degrees(g.out_degrees()),
    )


def analytic_threshold(stats: DegreeStats) -> float:
    """Configuration-model bond percolation threshold <k> / (<k^2> - <k>).

    Raises :class:`DegenerateDegreesError` when <k^2> <= <k>, i.e. the
    degree distribution admits no giant component at any occupation.
    """
    if stats.mean_k2 <= stats.mean_k or stats.mean_k <= 0:
        raise DegenerateDegreesError(
            f"no percolation transition for <k>={stats.mean_k}, <k^2>={stats.mean_k2}"
        )
    return stats.mean_k / (stats.mean_k2 - stats.mean_k)


# --- text format -----------------------------------------------------------
#
# qperc-graph v1
# directed <true|false>
# nodes <N>
# flag <node> <measured|swap-neighbor>     (zero or more)
# <u> <v> <pure|swapped> <value> <tag>     (zero or more)
# ghz <u> <v> <w> <scp>                    (zero or more)
#
# '#' starts a comment line. Reals use 17 significant digits so that a
# serialize -> parse -> serialize round trip is byte-identical.

_HEADER = "qperc-graph v1"


def _fmt_real(x: float) -> str:
    return format(float(x), ".17g")


def serialize(g: EntangledGraph) -> str:
    lines = [_HEADER, f"directed {'true' if g.directed else 'false'}", f"nodes {g.node_count}"]
    for node in np.flatnonzero(g.node_flags != ELIGIBLE):
        lines.append(f"flag {node} {_FLAG_NAMES[int(g.node_flags[node])]}")
    for e in g.edges:
        lines.append(f"{e.u} {e.v} {e.state.kind} {_fmt_real(e.state.value)} {e.tag}")
    for u, v, w, p in g.ghz_edges:
        lines.append(f"ghz {u} {v} {w} {_fmt_real(p)}")
    return "\n".join(lines) + "\n"


def parse(text: str) -> EntangledGraph:
    """Parse the edge-list format; raises GraphParseError with a line number."""
    lines = text.splitlines()
    # Strip comments and blank lines but remember original numbering.
    records = [
        (no, line.strip())
        for no, line in enumerate(lines, start=1)
        if line.strip() and not line.strip().startswith("#")
    ]
    if len(records) < 3:
        raise GraphParseError("missing header", len(lines) or 1)

    (no0, header), (no1, dline), (no2, nline) = records[0], records[1], records[2]
    if header != _HEADER:
        raise GraphParseError(f"expected {_HEADER!r}", no0)
    parts = dline.split()
    if len(parts) != 2 or parts[0] != "directed" or parts[1] not in ("true", "false"):
        raise GraphParseError("expected 'directed <true|false>'", no1)
    directed = parts[1] == "true"
    parts = nline.split()
    if len(parts) != 2 or parts[0] != "nodes":
        raise GraphParseError("expected 'nodes <N>'", no2)
    try:
        n = int(parts[1])
    except ValueError:
        raise GraphParseError(f"bad node count {parts[1]!r}", no2) from None
    if n <= 0:
        raise GraphParseError("node count must be positive", no2)

    g = EntangledGraph(n, directed)
    for no, line in records[3:]:
        fields = line.split()
        try:
            if fields[0] == "flag":
                if len(fields) != 3 or fields[2] not in _FLAG_VALUES:
                    raise ValueError("expected 'flag <node> <measured|swap-neighbor>'")
                node = int(fields[1])
                g._check_node(node)
                g.node_flags[node] = _FLAG_VALUES[fields[2]]
            elif fields[0] == "ghz":
                if len(fields) != 5:
                    raise ValueError("expected 'ghz <u> <v> <w> <scp>'")
                g.add_ghz_edge(int(fields[1]), int(fields[2]), int(fields[3]), float(fields[4]))
            else:
                if len(fields) != 5:
                    raise ValueError("expected '<u> <v> <pure|swapped> <value> <tag>'")
                u, v = int(fields[0]), int(fields[1])
                state = EdgeState(fields[2], float(fields[3]))
                g.add_edge(u, v, state, fields[4])
        except (ValueError, IndexError) as exc:
            raise GraphParseError(str(exc), no) from None
    return g
