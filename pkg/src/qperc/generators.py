"""Network family generators.

Every generator returns an :class:`~qperc.graph.EntangledGraph` whose edges
are all in the same pure state Pure(lambda1), and is fully deterministic in
its seed: the same arguments serialize byte-identically.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import (
    TAG_LATTICE,
    TAG_LONG_RANGE,
    TAG_REWIRED,
    EdgeState,
    EntangledGraph,
)

FAMILIES = ("ws", "kleinberg", "er", "square-lattice", "ring-regular")


def _ring_pairs(n: int, k: int) -> list[tuple[int, int]]:
    """Ring lattice adjacency: each node joined to k/2 neighbors per side."""
    return [(i, (i + j) % n) for i in range(n) for j in range(1, k // 2 + 1)]


def _validate_ws(n: int, k: int, beta: float):
    if k % 2 != 0:
        raise ValueError("mean degree k must be even")
    if k <= 0 or n <= k:
        raise ValueError("need n > k > 0")
    if not 0.0 <= beta <= 1.0:
        raise ValueError("rewire probability beta must be in [0, 1]")


def generate_ws(n: int, k: int, beta: float, lambda1: float, seed: int) -> EntangledGraph:
    """Watts-Strogatz small-world network.

    Starts from the k/2-neighbor ring lattice; each edge is independently
    rewired with probability ``beta`` by re-drawing its far endpoint
    uniformly, avoiding self-loops and duplicate simple edges. Edge count
    is exactly n*k/2 for any beta.
    """
    _validate_ws(n, k, beta)
    rng = np.random.default_rng(seed)
    pairs = _ring_pairs(n, k)
    existing = {(min(u, v), max(u, v)) for u, v in pairs}
    tags = [TAG_LATTICE] * len(pairs)
    if beta > 0:
        for idx, (u, v) in enumerate(pairs):
            if rng.random() >= beta:
                continue
            key = (min(u, v), max(u, v))
            for _ in range(8 * n):
                w = int(rng.integers(n))
                new_key = (min(u, w), max(u, w))
                if w != u and new_key not in existing:
                    existing.remove(key)
                    existing.add(new_key)
                    pairs[idx] = (u, w)
                    tags[idx] = TAG_REWIRED
                    break
            # else: node u already adjacent to everyone; keep the edge.
    g = EntangledGraph(n, directed=False)
    state = EdgeState.pure(lambda1)
    for (u, v), tag in zip(pairs, tags):
        g.add_edge(u, v, state, tag)
    return g


def generate_ring_regular(n: int, k: int, lambda1: float) -> EntangledGraph:
    """One-dimensional regular network: WS with beta = 0."""
    _validate_ws(n, k, 0.0)
    g = EntangledGraph(n, directed=False)
    state = EdgeState.pure(lambda1)
    for u, v in _ring_pairs(n, k):
        g.add_edge(u, v, state, TAG_LATTICE)
    return g


def _lattice_adjacencies(side: int) -> list[tuple[int, int]]:
    """Open-boundary square lattice adjacencies, row-major node ids."""
    pairs = []
    for r in range(side):
        for c in range(side):
            a = r * side + c
            if c + 1 < side:
                pairs.append((a, a + 1))
            if r + 1 < side:
                pairs.append((a, a + side))
    return pairs


def generate_square_lattice(side: int, lambda1: float) -> EntangledGraph:
    """Open-boundary side x side lattice with 2*side*(side-1) edges."""
    if side < 2:
        raise ValueError("side must be >= 2")
    g = EntangledGraph(side * side, directed=False)
    state = EdgeState.pure(lambda1)
    for u, v in _lattice_adjacencies(side):
        g.add_edge(u, v, state, TAG_LATTICE)
    return g


def long_range_weights(side: int, source: int, clustering_exp: float) -> np.ndarray:
    """Exact long-range target distribution from ``source``: probability
    proportional to (Manhattan distance)^(-g), zero on the source itself."""
    rows, cols = np.divmod(np.arange(side * side), side)
    sr, sc = divmod(source, side)
    dist = np.abs(rows - sr) + np.abs(cols - sc)
    weights = np.zeros(side * side, dtype=np.float64)
    mask = dist > 0
    weights[mask] = dist[mask].astype(np.float64) ** (-clustering_exp)
    return weights / weights.sum()


def sample_long_range_targets(
    side: int, source: int, z: int, clustering_exp: float, rng: np.random.Generator
) -> list[int]:
    """Draw z distinct long-range targets, resampling duplicates."""
    weights = long_range_weights(side, source, clustering_exp)
    chosen: list[int] = []
    while len(chosen) < z:
        t = int(rng.choice(side * side, p=weights))
        if t not in chosen:
            chosen.append(t)
    return chosen


def generate_kleinberg(
    side: int, z: int, clustering_exp: float, lambda1: float, seed: int
) -> EntangledGraph:
    """Directed Kleinberg small-world network on an open side x side lattice.

    Each lattice adjacency contributes a directed edge in both directions;
    each node additionally points z long-range directed edges at distinct
    targets drawn with probability proportional to Manhattan
    distance^(-clustering_exp). A long-range edge may duplicate a lattice
    adjacency, giving a parallel edge.
    """
    if side < 2:
        raise ValueError("side must be >= 2")
    if z < 0:
        raise ValueError("z must be >= 0")
    if clustering_exp < 0:
        raise ValueError("clustering_exp must be >= 0")
    rng = np.random.default_rng(seed)
    n = side * side
    g = EntangledGraph(n, directed=True)
    state = EdgeState.pure(lambda1)
    for u, v in _lattice_adjacencies(side):
        g.add_edge(u, v, state, TAG_LATTICE)
        g.add_edge(v, u, state, TAG_LATTICE)
    if z > 0:
        for source in range(n):
            for target in sample_long_range_targets(side, source, z, clustering_exp, rng):
                g.add_edge(source, target, state, TAG_LONG_RANGE)
    return g


def generate_er(n: int, mean_degree: float, lambda1: float, seed: int) -> EntangledGraph:
    """Erdos-Renyi G(n, p) with p = mean_degree / (n - 1)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if not 0 < mean_degree <= n - 1:
        raise ValueError("need 0 < mean_degree <= n - 1")
    rng = np.random.default_rng(seed)
    p_edge = mean_degree / (n - 1)
    us, vs = np.triu_indices(n, k=1)
    mask = rng.random(us.size) < p_edge
    g = EntangledGraph(n, directed=False)
    state = EdgeState.pure(lambda1)
    for u, v in zip(us[mask], vs[mask]):
        g.add_edge(int(u), int(v), state, TAG_LATTICE)
    return g


@dataclass(frozen=True)
class GeneratorSpec:
    """Declarative description of one network to generate.

    ``params`` is family specific: ws wants n, k, beta; kleinberg wants
    side, z, clustering_exp; er wants n, mean_degree; square-lattice wants
    side; ring-regular wants n, k.
    """

    family: str
    lambda1: float
    seed: int = 0
    params: dict = field(default_factory=dict)

    def build(self) -> EntangledGraph:
        p = self.params
        if self.family == "ws":
            return generate_ws(int(p["n"]), int(p["k"]), float(p["beta"]), self.lambda1, self.seed)
        if self.family == "kleinberg":
            return generate_kleinberg(
                int(p["side"]), int(p["z"]), float(p["clustering_exp"]), self.lambda1, self.seed
            )
        if self.family == "er":
            return generate_er(int(p["n"]), float(p["mean_degree"]), self.lambda1, self.seed)
        if self.family == "square-lattice":
            return generate_square_lattice(int(p["side"]), self.lambda1)
        if self.family == "ring-regular":
            return generate_ring_regular(int(p["n"]), int(p["k"]), self.lambda1)
        raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
