import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats as scipy_stats

from qperc.generators import (
    GeneratorSpec,
    generate_er,
    generate_kleinberg,
    generate_ring_regular,
    generate_square_lattice,
    generate_ws,
    long_range_weights,
    sample_long_range_targets,
)
from qperc.graph import TAG_LATTICE, TAG_LONG_RANGE, degree_stats, serialize


class TestWattsStrogatz:
    def test_beta_zero_is_ring_lattice(self):
        g = generate_ws(10, 4, 0.0, 0.75, 0)
        assert degree_stats(g).histogram == {4: 10}
        assert g.edge_count == 20

    def test_edge_count_preserved_at_beta_one(self):
        g = generate_ws(1000, 6, 1.0, 0.75, 5)
        assert g.edge_count == 3000

    def test_no_self_loops_or_duplicates(self):
        g = generate_ws(300, 6, 0.7, 0.75, 2)
        seen = set()
        for e in g.edges:
            assert e.u != e.v
            assert (e.u, e.v) not in seen
            seen.add((e.u, e.v))

    def test_all_edges_pure_with_requested_lambda(self):
        g = generate_ws(50, 4, 0.3, 0.82, 9)
        assert all(e.state.is_pure and e.state.value == 0.82 for e in g.edges)

    def test_deterministic_in_seed(self):
        a = serialize(generate_ws(200, 6, 0.2, 0.75, 123))
        b = serialize(generate_ws(200, 6, 0.2, 0.75, 123))
        c = serialize(generate_ws(200, 6, 0.2, 0.75, 124))
        assert a == b
        assert a != c

    def test_beta_one_degree_moments_vs_resampled_bruteforce(self):
        # at beta = 1 every edge endpoint is re-drawn; compare the second
        # moment against an independent brute-force resampling estimate
        k2 = np.mean(
            [degree_stats(generate_ws(500, 6, 1.0, 0.75, s)).mean_k2 for s in range(12)]
        )
        brute = []
        rng = np.random.default_rng(999)
        for _ in range(12):
            deg = np.full(500, 3)  # every node keeps its own three scanned edges
            for i in range(500):
                for _ in range(3):
                    deg[int(rng.integers(500))] += 1  # far endpoint lands uniformly
            brute.append(np.mean(deg.astype(float) ** 2))
        assert k2 == pytest.approx(np.mean(brute), rel=0.03)

    @pytest.mark.parametrize("n,k,beta", [(10, 3, 0.1), (10, 4, 1.5), (4, 4, 0.1)])
    def test_invalid_parameters(self, n, k, beta):
        with pytest.raises(ValueError):
            generate_ws(n, k, beta, 0.75, 0)

    @given(
        st.integers(1, 4).map(lambda h: 2 * h),
        st.floats(0.0, 1.0),
        st.integers(0, 2**32 - 1),
    )
    @settings(max_examples=30, deadline=None)
    def test_edge_count_invariant(self, k, beta, seed):
        n = k + 1 + (seed % 40)
        g = generate_ws(n, k, beta, 0.75, seed)
        assert g.edge_count == n * k // 2


class TestRingRegular:
    def test_matches_ws_beta_zero(self):
        a = serialize(generate_ring_regular(1000, 6, 0.75))
        b = serialize(generate_ws(1000, 6, 0.0, 0.75, 42))
        assert a == b

    def test_every_degree_six(self):
        assert degree_stats(generate_ring_regular(1000, 6, 0.75)).histogram == {6: 1000}


class TestSquareLattice:
    def test_30x30_counts(self):
        g = generate_square_lattice(30, 0.75)
        assert g.node_count == 900
        assert g.edge_count == 1740  # 2 * 30 * 29

    def test_2x2(self):
        g = generate_square_lattice(2, 0.75)
        assert g.node_count == 4
        assert g.edge_count == 4

    def test_interior_degree_four(self):
        deg = generate_square_lattice(5, 0.75).degrees().reshape(5, 5)
        assert (deg[1:-1, 1:-1] == 4).all()
        assert deg[0, 0] == 2


class TestKleinberg:
    def test_out_degree_six_in_interior(self):
        g = generate_kleinberg(30, 2, 2.0, 0.75, 3)
        out = g.out_degrees().reshape(30, 30)
        assert (out[1:-1, 1:-1] == 6).all()  # 4 lattice + 2 long-range
        assert out[0, 0] == 4  # corners: 2 lattice + 2 long-range
        assert degree_stats(g).out_stats.histogram[6] == 28 * 28

    def test_2x2_no_long_range(self):
        g = generate_kleinberg(2, 0, 2.0, 0.75, 0)
        assert g.edge_count == 8
        assert degree_stats(g).out_stats.histogram == {2: 4}

    def test_lattice_edges_bidirectional(self):
        g = generate_kleinberg(4, 0, 2.0, 0.75, 0)
        pairs = {(e.u, e.v) for e in g.edges}
        assert all((v, u) in pairs for u, v in pairs)

    def test_long_range_distinct_per_source(self):
        g = generate_kleinberg(10, 3, 2.0, 0.75, 11)
        by_source = {}
        for e in g.edges:
            if e.tag == TAG_LONG_RANGE:
                by_source.setdefault(e.u, []).append(e.v)
        for source, targets in by_source.items():
            assert len(targets) == 3
            assert len(set(targets)) == 3
            assert source not in targets

    def test_distance_ratio_matches_inverse_square(self):
        # P(specific node at distance 1) / P(specific node at distance 2) = 4
        side = 7
        center = 3 * side + 3
        w = long_range_weights(side, center, 2.0)
        assert w[center + 1] / w[center + 2] == pytest.approx(4.0)
        rng = np.random.default_rng(0)
        draws = rng.choice(side * side, size=120_000, p=w)
        n1 = int(np.sum(draws == center + 1))
        n2 = int(np.sum(draws == center + 2))
        assert n1 / n2 == pytest.approx(4.0, rel=0.1)

    def test_sampled_frequencies_match_exact_weights(self):
        # goodness of fit on a 5x5 lattice against the exact normalization
        side = 5
        source = 12
        w = long_range_weights(side, source, 2.0)
        rng = np.random.default_rng(42)
        counts = np.zeros(side * side)
        trials = 40_000
        for _ in range(trials):
            (t,) = sample_long_range_targets(side, source, 1, 2.0, rng)
            counts[t] += 1
        mask = w > 0
        chi = scipy_stats.chisquare(counts[mask], trials * w[mask])
        assert chi.pvalue > 1e-4

    def test_deterministic(self):
        assert serialize(generate_kleinberg(8, 2, 2.0, 0.75, 5)) == serialize(
            generate_kleinberg(8, 2, 2.0, 0.75, 5)
        )

    @pytest.mark.parametrize("side,z,g_exp", [(1, 2, 2.0), (5, -1, 2.0), (5, 2, -0.5)])
    def test_invalid_parameters(self, side, z, g_exp):
        with pytest.raises(ValueError):
            generate_kleinberg(side, z, g_exp, 0.75, 0)


class TestErdosRenyi:
    def test_mean_degree_close_to_requested(self):
        means = [degree_stats(generate_er(1000, 6.0, 0.75, s)).mean_k for s in range(10)]
        assert np.mean(means) == pytest.approx(6.0, abs=0.5)

    def test_two_nodes_mean_one_gives_certain_edge(self):
        g = generate_er(2, 1.0, 0.75, 0)
        assert g.edge_count == 1

    def test_degree_distribution_binomial(self):
        # aggregate histogram over many seeds vs Binomial(n-1, p) pmf
        n, mean = 200, 6.0
        counts = np.zeros(n)
        seeds = 100
        for s in range(seeds):
            for k, c in degree_stats(generate_er(n, mean, 0.75, s)).histogram.items():
                counts[k] += c
        rv = scipy_stats.binom(n - 1, mean / (n - 1))
        lo, hi = 1, 14  # pool tails so expected counts stay healthy
        observed = np.concatenate(
            [[counts[:lo].sum()], counts[lo:hi], [counts[hi:].sum()]]
        )
        expected = seeds * n * np.concatenate(
            [[rv.cdf(lo - 1)], rv.pmf(np.arange(lo, hi)), [1 - rv.cdf(hi - 1)]]
        )
        chi = scipy_stats.chisquare(observed, expected * observed.sum() / expected.sum())
        assert chi.pvalue > 1e-4

    def test_invalid_parameters(self):
        with pytest.raises(ValueError):
            generate_er(1, 0.5, 0.75, 0)
        with pytest.raises(ValueError):
            generate_er(10, 0.0, 0.75, 0)
        with pytest.raises(ValueError):
            generate_er(10, 9.5, 0.75, 0)


class TestGeneratorSpec:
    def test_ws_build_matches_direct_call(self):
        spec = GeneratorSpec("ws", 0.75, 3, {"n": 50, "k": 4, "beta": 0.2})
        assert serialize(spec.build()) == serialize(generate_ws(50, 4, 0.2, 0.75, 3))

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            GeneratorSpec("barabasi", 0.75, 0, {}).build()

    def test_all_edges_tagged(self):
        g = GeneratorSpec(
            "kleinberg", 0.75, 1, {"side": 5, "z": 1, "clustering_exp": 2.0}
        ).build()
        assert {e.tag for e in g.edges} == {TAG_LATTICE, TAG_LONG_RANGE}
