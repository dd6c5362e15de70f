"""Network rewrites applied before percolation.

Three rewrites are provided: the undirected q-swap, the directed in/out
q-swap for networks whose edges live in direction-specific memories, and
the quantum-walk rewrite that adds chords (or three-party GHZ hyper-edges)
without destroying existing connections.

A q-swap center is a node of degree exactly q whose incident edges are all
still pure. Firing it measures the center out of the network: its q edges
are consumed and its neighbors are joined in a cycle of swapped edges that
keep the conversion probability of the pure states they came from (for
heterogeneous inputs, the weaker of the two parent edges). Neighbors of a
fired center are marked and can never fire as centers themselves.

``neighbor_policy`` controls the one genuinely ambiguous rule, whether a
node already marked as a swap neighbor may be joined into a *later*
center's cycle:

* ``"endpoint-ok"`` (default): marked nodes may re-enter later cycles and
  only center eligibility is restricted; the rewrite then conserves edge
  count exactly (q consumed, q created) for q >= 3, and for q = 2 loses
  one edge per center.
* ``"exclude"``: a marked node may not re-enter; its edge into the later
  center is still consumed by the measurement but it receives no
  replacement, so each such collision loses an edge and the network thins
  out as swaps proceed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import (
    ELIGIBLE,
    MEASURED,
    SWAP_NEIGHBOR,
    TAG_SWAP_PRODUCT,
    TAG_WALK_CHORD,
    Edge,
    EdgeState,
    EntangledGraph,
    scp,
)

POLICIES = ("endpoint-ok", "exclude")
WALK_MODES = ("triangle-independent", "atomic-ghz")


@dataclass
class SwapReport:
    """Audit counters for one rewrite pass.

    ``fired`` lists swap centers in firing order (``(node, 'in'|'out')``
    tuples for the directed variant) so a rewrite can be replayed.
    """

    centers_swapped: int = 0
    edges_consumed: int = 0
    edges_created: int = 0
    nodes_isolated: int = 0
    fired: list = field(default_factory=list)

    def as_csv_line(self) -> str:
        return (
            f"{self.centers_swapped},{self.edges_consumed},"
            f"{self.edges_created},{self.nodes_isolated}"
        )


class _MutableGraph:
    """Edge store with live incidence lists, for rewrites only."""

    def __init__(self, g: EntangledGraph):
        self.graph = g
        self.alive = np.ones(len(g.edges), dtype=bool)
        self.inc: list[list[int]] = [[] for _ in range(g.node_count)]
        for i, e in enumerate(g.edges):
            self.inc[e.u].append(i)
            self.inc[e.v].append(i)

    def live_incident(self, v: int) -> list[int]:
        live = [i for i in self.inc[v] if self.alive[i]]
        self.inc[v] = live
        return live

    def degree(self, v: int) -> int:
        return len(self.live_incident(v))

    def remove(self, idx: int):
        self.alive[idx] = False

    def add(self, u: int, v: int, state: EdgeState, tag: str):
        g = self.graph
        if not g.directed and u > v:
            u, v = v, u
        g.edges.append(Edge(u, v, state, tag))
        idx = len(g.edges) - 1
        self.alive = np.append(self.alive, True)
        self.inc[u].append(idx)
        self.inc[v].append(idx)

    def finish(self) -> EntangledGraph:
        g = self.graph
        g.edges = [e for i, e in enumerate(g.edges) if self.alive[i]]
        return g


def _swapped_cycle_edges(members: list[int], parent_scp: list[float]) -> list[tuple[int, int, float]]:
    """Cycle (or single bridging edge) over ``members``; edge i-j keeps the
    weaker parent SCP. Degenerates to one edge for two members, nothing for
    fewer."""
    m = len(members)
    if m < 2:
        return []
    if m == 2:
        return [(members[0], members[1], min(parent_scp[0], parent_scp[1]))]
    out = []
    for i in range(m):
        j = (i + 1) % m
        out.append((members[i], members[j], min(parent_scp[i], parent_scp[j])))
    return out


def qswap_undirected(
    g: EntangledGraph, q: int, seed: int, neighbor_policy: str = "endpoint-ok"
) -> tuple[EntangledGraph, SwapReport]:
    """Apply q-swap to every firing center of an undirected graph.

    Nodes are scanned once in seeded-random order; the graph the later
    candidates see includes all earlier rewrites.
    """
    if g.directed:
        raise ValueError("qswap_undirected needs an undirected graph")
    if q < 2:
        raise ValueError("q must be >= 2")
    if neighbor_policy not in POLICIES:
        raise ValueError(f"neighbor_policy must be one of {POLICIES}")

    work = g.copy()
    mg = _MutableGraph(work)
    flags = work.node_flags
    report = SwapReport()
    rng = np.random.default_rng(seed)
    degree_before = work.degrees()

    for v in rng.permutation(work.node_count):
        v = int(v)
        if flags[v] != ELIGIBLE:
            continue
        inc = mg.live_incident(v)
        if len(inc) != q:
            continue
        edges = [work.edges[i] for i in inc]
        if not all(e.state.is_pure for e in edges):
            continue
        neighbors = [e.v if e.u == v else e.u for e in edges]
        if len(set(neighbors)) != q:
            continue  # parallel edges at the center would make self-loop cycle edges

        if neighbor_policy == "exclude":
            members = [u for u in neighbors if flags[u] != SWAP_NEIGHBOR]
        else:
            members = neighbors
        parent = [scp(e.state) for e, u in zip(edges, neighbors) if u in members]

        for i in inc:
            mg.remove(i)
        created = _swapped_cycle_edges(members, parent)
        for a, b, p in created:
            mg.add(a, b, EdgeState.swapped(p), TAG_SWAP_PRODUCT)
        flags[v] = MEASURED
        for u in members:
            if flags[u] == ELIGIBLE:
                flags[u] = SWAP_NEIGHBOR
        report.centers_swapped += 1
        report.edges_consumed += q
        report.edges_created += len(created)
        report.fired.append(v)

    out = mg.finish()
    degree_after = out.degrees()
    report.nodes_isolated = int(np.count_nonzero((degree_after == 0) & (degree_before > 0)))
    return out, report


def qswap_directed(
    g: EntangledGraph,
    q_in: int | None = None,
    q_out: int | None = None,
    seed: int = 0,
    neighbor_policy: str = "endpoint-ok",
) -> tuple[EntangledGraph, SwapReport]:
    """In-flow and out-flow q-swaps on a directed graph.

    An in-swap at a node of in-degree exactly ``q_in`` consumes its
    incoming edges and joins the source nodes in a directed swapped cycle;
    the out-swap is the mirror image over outgoing edges. Both passes run
    once over the node set, in-pass first, and keep separate eligibility
    marks so a node may fire once per direction.
    """
    if not g.directed:
        raise ValueError("qswap_directed needs a directed graph")
    if q_in is None and q_out is None:
        raise ValueError("need q_in, q_out, or both")
    for q in (q_in, q_out):
        if q is not None and q < 2:
            raise ValueError("q must be >= 2")
    if neighbor_policy not in POLICIES:
        raise ValueError(f"neighbor_policy must be one of {POLICIES}")

    work = g.copy()
    mg = _MutableGraph(work)
    report = SwapReport()
    rng = np.random.default_rng(seed)
    degree_before = work.degrees()
    in_flags = work.node_flags.copy()
    out_flags = work.node_flags.copy()

    def run_pass(direction: str, q: int, flags: np.ndarray):
        incoming = direction == "in"
        for v in rng.permutation(work.node_count):
            v = int(v)
            if flags[v] != ELIGIBLE:
                continue
            if incoming:
                inc = [i for i in mg.live_incident(v) if work.edges[i].v == v]
            else:
                inc = [i for i in mg.live_incident(v) if work.edges[i].u == v]
            if len(inc) != q:
                continue
            edges = [work.edges[i] for i in inc]
            if not all(e.state.is_pure for e in edges):
                continue
            partners = [e.u if incoming else e.v for e in edges]
            if len(set(partners)) != q:
                continue

            if neighbor_policy == "exclude":
                members = [u for u in partners if flags[u] != SWAP_NEIGHBOR]
            else:
                members = partners
            parent = [scp(e.state) for e, u in zip(edges, partners) if u in members]

            for i in inc:
                mg.remove(i)
            created = _swapped_cycle_edges(members, parent)
            for a, b, p in created:
                mg.add(a, b, EdgeState.swapped(p), TAG_SWAP_PRODUCT)
            flags[v] = MEASURED
            for u in members:
                if flags[u] == ELIGIBLE:
                    flags[u] = SWAP_NEIGHBOR
            report.centers_swapped += 1
            report.edges_consumed += q
            report.edges_created += len(created)
            report.fired.append((v, direction))

    if q_in is not None:
        run_pass("in", q_in, in_flags)
    if q_out is not None:
        run_pass("out", q_out, out_flags)

    out = mg.finish()
    merged = np.where(
        (in_flags == MEASURED) | (out_flags == MEASURED),
        MEASURED,
        np.maximum(in_flags, out_flags),
    ).astype(np.int8)
    out.node_flags = merged
    degree_after = out.degrees()
    report.nodes_isolated = int(np.count_nonzero((degree_after == 0) & (degree_before > 0)))
    return out, report


def walk_rewrite(
    g: EntangledGraph, mode: str = "triangle-independent", seed: int = 0
) -> tuple[EntangledGraph, SwapReport]:
    """Quantum-walk rewrite: pair up incident edges and bridge each pair.

    At every node v (seeded-random order) the still-unpaired pure edges
    are matched into disjoint pairs; a pair (u-v, v-w) keeps both original
    edges and adds a new u-w connection. In ``triangle-independent`` mode
    the connection is a fresh pure edge that converts on its own; in
    ``atomic-ghz`` mode the triple (u, v, w) is recorded as a GHZ
    hyper-edge that percolation converts with a single trial. Each edge
    participates in at most one pair across the whole pass.
    """
    if g.directed:
        raise ValueError("walk_rewrite needs an undirected graph")
    if mode not in WALK_MODES:
        raise ValueError(f"mode must be one of {WALK_MODES}")

    work = g.copy()
    mg = _MutableGraph(work)
    report = SwapReport()
    rng = np.random.default_rng(seed)
    original_count = len(work.edges)  # chords created here never pair again
    paired: set[int] = set()

    for v in rng.permutation(work.node_count):
        v = int(v)
        cand = [
            i
            for i in mg.live_incident(v)
            if i < original_count and i not in paired and work.edges[i].state.is_pure
        ]
        if len(cand) < 2:
            continue
        cand = [cand[i] for i in rng.permutation(len(cand))]
        made_pair = False
        for a, b in zip(cand[0::2], cand[1::2]):
            ea, eb = work.edges[a], work.edges[b]
            u = ea.v if ea.u == v else ea.u
            w = eb.v if eb.u == v else eb.u
            paired.add(a)
            paired.add(b)
            made_pair = True
            report.edges_consumed += 2
            if u == w:
                continue  # parallel pair, nothing to bridge
            p = min(scp(ea.state), scp(eb.state))
            if mode == "triangle-independent":
                # pure edge with the same conversion probability as the parents
                mg.add(u, w, EdgeState.pure(1.0 - p / 2.0), TAG_WALK_CHORD)
            else:
                work.add_ghz_edge(min(u, w), v, max(u, w), p)
            report.edges_created += 1
        if made_pair:
            report.centers_swapped += 1

    out = mg.finish()
    return out, report
