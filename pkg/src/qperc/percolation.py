"""Monte Carlo bond percolation over entangled graphs.

Each trial converts every edge independently with its conversion
probability (or a uniform override, the swept SCP), then measures the
giant connected component with a union-find over the converted edges.
A breadth-first-search oracle is provided as an independent check of the
union-find clustering.

GCC is normalized by the number of nodes still in the network: all nodes
except swap centers that were measured out and retain no edges.

Randomness is reproducible and schedule-independent: trial (i, j) of a
sweep draws from a stream seeded by (seed, p_index, trial_index), or by
(seed, trial_index) in coupled mode, where one uniform draw per edge is
shared across the whole p grid, making every per-trial curve exactly
monotone in p.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .graph import EntangledGraph, scp

BIDIRECTIONAL_RULES = ("doubled", "independent")

_KIND_EDGE = 0
_KIND_PAIR = 1  # antiparallel directed pair combined into one trial
_KIND_GHZ = 2


class NoThresholdError(ValueError):
    """The curve never crosses the requested GCC level."""


@dataclass(frozen=True)
class PercolationConfig:
    """Sweep description: SCP sample points, trials per point, seeding.

    ``bidirectional_rule`` selects how antiparallel directed edge pairs
    convert: ``"doubled"`` replaces each pair by one combined trial with
    probability 1 - (1-p)^2, ``"independent"`` keeps two separate trials.
    ``ghz_edges`` overrides the graph's own GHZ hyper-edges when given.
    ``coupled`` shares one uniform draw per edge across all p values.
    """

    p_values: tuple = tuple(np.round(np.linspace(0.0, 1.0, 101), 10))
    trials_per_point: int = 100
    seed: int = 0
    bidirectional_rule: str = "doubled"
    ghz_edges: list | None = None
    coupled: bool = False

    def __post_init__(self):
        ps = np.asarray(self.p_values, dtype=float)
        if ps.size == 0:
            raise ValueError("p_values must be non-empty")
        if np.any(ps < 0) or np.any(ps > 1):
            raise ValueError("p_values must lie in [0, 1]")
        if np.any(np.diff(ps) <= 0):
            raise ValueError("p_values must be strictly increasing")
        if self.trials_per_point <= 0:
            raise ValueError("trials_per_point must be positive")
        if self.bidirectional_rule not in BIDIRECTIONAL_RULES:
            raise ValueError(f"bidirectional_rule must be one of {BIDIRECTIONAL_RULES}")


@dataclass(frozen=True)
class PercolationCurve:
    """Sampled (p, gcc_mean, gcc_std, trials) rows of one sweep."""

    rows: tuple

    @property
    def p(self) -> np.ndarray:
        return np.array([r[0] for r in self.rows])

    @property
    def gcc_mean(self) -> np.ndarray:
        return np.array([r[1] for r in self.rows])

    @property
    def gcc_std(self) -> np.ndarray:
        return np.array([r[2] for r in self.rows])

    def check_monotone(self, slack: float = 3.0) -> bool:
        """True when no consecutive drop exceeds ``slack`` * gcc_std."""
        mean, std = self.gcc_mean, self.gcc_std
        drops = mean[:-1] - mean[1:]
        allowed = slack * np.maximum(std[:-1], 1e-12)
        return bool(np.all(drops <= allowed))

    def to_csv(self) -> str:
        lines = ["p,gcc_mean,gcc_std,trials"]
        for p, mean, std, trials in self.rows:
            lines.append(f"{p:.6f},{mean:.6f},{std:.6f},{trials}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "PercolationCurve":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or lines[0].split(",")[:4] != ["p", "gcc_mean", "gcc_std", "trials"]:
            raise ValueError("expected header 'p,gcc_mean,gcc_std,trials'")
        rows = []
        for ln in lines[1:]:
            p, mean, std, trials = ln.split(",")
            rows.append((float(p), float(mean), float(std), int(trials)))
        return cls(rows=tuple(rows))


@njit(cache=True)
def _largest_component(n: int, us: np.ndarray, vs: np.ndarray) -> int:
    """Union-find (path halving, union by size) largest component size."""
    parent = np.arange(n, dtype=np.int64)
    size = np.ones(n, dtype=np.int64)
    best = 1
    for i in range(us.shape[0]):
        a = us[i]
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        b = vs[i]
        while parent[b] != b:
            parent[b] = parent[parent[b]]
            b = parent[b]
        if a != b:
            if size[a] < size[b]:
                a, b = b, a
            parent[b] = a
            size[a] += size[b]
            if size[a] > best:
                best = size[a]
    return best


def unionfind_gcc(n: int, pairs: np.ndarray, active_count: int | None = None) -> float:
    """Largest-component fraction of the converted edge list ``pairs``."""
    if active_count is None:
        active_count = n
    if pairs.size == 0:
        return 1.0 / active_count
    us = np.ascontiguousarray(pairs[:, 0], dtype=np.int64)
    vs = np.ascontiguousarray(pairs[:, 1], dtype=np.int64)
    return _largest_component(n, us, vs) / active_count


def bfs_gcc_oracle(g: EntangledGraph, converted_pairs, active_count: int | None = None) -> float:
    """Independent BFS largest-component fraction over a fixed conversion
    outcome; must agree exactly with :func:`unionfind_gcc`."""
    n = g.node_count
    if active_count is None:
        active_count = g.active_node_count()
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in converted_pairs:
        adj[int(u)].append(int(v))
        adj[int(v)].append(int(u))
    seen = np.zeros(n, dtype=bool)
    best = 1
    for start in range(n):
        if seen[start]:
            continue
        seen[start] = True
        queue = [start]
        count = 0
        while queue:
            node = queue.pop()
            count += 1
            for nxt in adj[node]:
                if not seen[nxt]:
                    seen[nxt] = True
                    queue.append(nxt)
        if count > best:
            best = count
    return best / active_count


class ConversionModel:
    """Precomputed per-graph conversion units.

    A unit is one Bernoulli trial: a single edge, an antiparallel directed
    pair under the doubled rule, or a GHZ hyper-edge (which joins three
    nodes at once). Units expand to node pairs for clustering.
    """

    def __init__(
        self,
        g: EntangledGraph,
        bidirectional_rule: str = "doubled",
        ghz_edges: list | None = None,
    ):
        if bidirectional_rule not in BIDIRECTIONAL_RULES:
            raise ValueError(f"bidirectional_rule must be one of {BIDIRECTIONAL_RULES}")
        self.graph = g
        self.active_count = g.active_node_count()
        ghz = g.ghz_edges if ghz_edges is None else ghz_edges

        kinds: list[int] = []
        base1: list[float] = []
        base2: list[float] = []
        pair_rows: list[tuple[int, int, int]] = []  # (u, v, unit index)

        def add_unit(kind, p1, p2, rows):
            idx = len(kinds)
            kinds.append(kind)
            base1.append(p1)
            base2.append(p2)
            for u, v in rows:
                pair_rows.append((u, v, idx))

        if g.directed and bidirectional_rule == "doubled":
            forward: dict[tuple[int, int], list[float]] = {}
            backward: dict[tuple[int, int], list[float]] = {}
            for e in g.edges:
                key = (min(e.u, e.v), max(e.u, e.v))
                bucket = forward if e.u == key[0] else backward
                bucket.setdefault(key, []).append(scp(e.state))
            for key in sorted(set(forward) | set(backward)):
                fwd = forward.get(key, [])
                rev = backward.get(key, [])
                for p1, p2 in zip(fwd, rev):
                    add_unit(_KIND_PAIR, p1, p2, [key])
                for p1 in fwd[len(rev):] + rev[len(fwd):]:
                    add_unit(_KIND_EDGE, p1, 0.0, [key])
        else:
            for e in g.edges:
                add_unit(_KIND_EDGE, scp(e.state), 0.0, [(e.u, e.v)])

        for u, v, w, p in ghz:
            add_unit(_KIND_GHZ, p, 0.0, [(u, v), (v, w)])

        self.kinds = np.array(kinds, dtype=np.int8)
        self.base1 = np.array(base1, dtype=np.float64)
        self.base2 = np.array(base2, dtype=np.float64)
        self.pair_uv = np.array([(u, v) for u, v, _ in pair_rows], dtype=np.int64).reshape(-1, 2)
        self.pair_unit = np.array([i for _, _, i in pair_rows], dtype=np.int64)
        self.unit_count = len(kinds)

    def probabilities(self, p_override: float | None) -> np.ndarray:
        """Per-unit conversion probability at one sweep point."""
        if p_override is None:
            p1, p2 = self.base1, self.base2
        else:
            p1 = np.full(self.unit_count, float(p_override))
            p2 = p1
        probs = p1.copy()
        pair = self.kinds == _KIND_PAIR
        probs[pair] = 1.0 - (1.0 - p1[pair]) * (1.0 - p2[pair])
        return probs

    def converted_pairs(self, active_units: np.ndarray) -> np.ndarray:
        return self.pair_uv[active_units[self.pair_unit]]

    def trial_gcc(self, probs: np.ndarray, draws: np.ndarray) -> float:
        active = draws < probs
        return unionfind_gcc(self.graph.node_count, self.converted_pairs(active), self.active_count)


def percolate_once(
    g: EntangledGraph,
    p_override: float | None = None,
    trial_seed=0,
    bidirectional_rule: str = "doubled",
    ghz_edges: list | None = None,
) -> float:
    """One bond-percolation trial; returns the GCC fraction in (0, 1]."""
    model = ConversionModel(g, bidirectional_rule, ghz_edges)
    rng = np.random.default_rng(trial_seed)
    return model.trial_gcc(model.probabilities(p_override), rng.random(model.unit_count))


def sweep(g: EntangledGraph, cfg: PercolationConfig) -> PercolationCurve:
    """Monte Carlo GCC-versus-SCP curve; deterministic in (graph, cfg)."""
    model = ConversionModel(g, cfg.bidirectional_rule, cfg.ghz_edges)
    p_values = list(cfg.p_values)
    trials = cfg.trials_per_point
    gcc = np.zeros((len(p_values), trials))

    if cfg.coupled:
        for t in range(trials):
            draws = np.random.default_rng([cfg.seed, t]).random(model.unit_count)
            for i, p in enumerate(p_values):
                gcc[i, t] = model.trial_gcc(model.probabilities(p), draws)
    else:
        for i, p in enumerate(p_values):
            probs = model.probabilities(p)
            for t in range(trials):
                draws = np.random.default_rng([cfg.seed, i, t]).random(model.unit_count)
                gcc[i, t] = model.trial_gcc(probs, draws)

    rows = []
    for i, p in enumerate(p_values):
        std = float(np.std(gcc[i], ddof=1)) if trials > 1 else 0.0
        rows.append((float(p), float(np.mean(gcc[i])), std, trials))
    return PercolationCurve(rows=tuple(rows))


def estimate_threshold(
    curve: PercolationCurve, method: str = "gcc-crossing", theta: float = 0.05
) -> float:
    """Percolation threshold estimate from a sampled curve.

    ``gcc-crossing`` linearly interpolates the first crossing of GCC level
    ``theta``; ``susceptibility-peak`` returns the p with the largest
    trial-to-trial variance. Raises :class:`NoThresholdError` when the
    curve never reaches ``theta``.
    """
    if not curve.rows:
        raise ValueError("empty curve")
    if method == "susceptibility-peak":
        return float(curve.p[int(np.argmax(curve.gcc_std**2))])
    if method != "gcc-crossing":
        raise ValueError(f"unknown method {method!r}")
    if not 0 < theta < 1:
        raise ValueError("theta must be in (0, 1)")
    p, mean = curve.p, curve.gcc_mean
    above = np.flatnonzero(mean >= theta)
    if above.size == 0:
        raise NoThresholdError(f"curve never reaches GCC {theta}")
    i = int(above[0])
    if i == 0:
        return float(p[0])
    frac = (theta - mean[i - 1]) / (mean[i] - mean[i - 1])
    return float(p[i - 1] + frac * (p[i] - p[i - 1]))
