import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dircomm.census import edge_cycle_flags
from dircomm.graph import DirectedGraph, GraphParseError, collapse_to_undirected
from dircomm.metrics import (CategoryLabels, ConvergenceError, directed_modularity, evaluate,
                             ground_truth_cut_stats, k_cycle_cut_counts, k_cycle_cut_ratio, linkrank,
                             modularity, pagerank, parse_category_labels)
from dircomm.partitioner import Partition
from dircomm.weighting import apply_scheme

from conftest import digraphs, random_digraph
from oracles import (directed_modularity_double_sum, google_matrix, linkrank_dense,
                     modularity_double_sum, stationary)

CYCLE = DirectedGraph.from_edges(3, [(0, 1), (1, 2), (2, 0)])
TWO_CYCLES = DirectedGraph.from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])


def part(*ids):
    return Partition.from_assignment(ids)


class TestModularity:
    def test_two_triangles(self):
        p = part(0, 0, 0, 1, 1, 1)
        assert modularity_double_sum(TWO_CYCLES, p.assignment) == pytest.approx(0.5)
        assert modularity(collapse_to_undirected(TWO_CYCLES), p) == pytest.approx(0.5, abs=1e-15)

    def test_weights_ignored(self):
        ud = collapse_to_undirected(TWO_CYCLES)
        p = part(0, 0, 1, 1, 1, 0)
        assert modularity(apply_scheme(TWO_CYCLES, "three_cycle"), p) == modularity(ud, p)

    def test_empty_graph(self):
        with pytest.raises(ValueError):
            modularity(collapse_to_undirected(DirectedGraph.from_edges(2, [])), Partition.single(2))

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            modularity(collapse_to_undirected(CYCLE), Partition.single(4))

    @given(digraphs(), st.integers(1, 4), st.randoms(use_true_random=False))
    def test_matches_double_sum_and_relabel_invariant(self, g, k, r):
        if g.m == 0:
            return
        a = np.array([r.randrange(k) for _ in range(g.n)])
        p = Partition.from_assignment(a)
        q = modularity(collapse_to_undirected(g), p)
        assert q == pytest.approx(modularity_double_sum(g, p.assignment), abs=1e-12)
        perm = list(range(g.n))
        r.shuffle(perm)
        h = g.relabel(perm)
        ph = np.empty(g.n, dtype=np.int64)
        ph[perm] = (p.assignment + 1) % p.k  # moved nodes, renamed communities
        assert modularity(collapse_to_undirected(h), Partition(ph, p.k)) == pytest.approx(q, abs=1e-12)


class TestDirectedModularity:
    def test_reciprocal_pair(self):
        g = DirectedGraph.from_edges(2, [(0, 1), (1, 0)])
        assert directed_modularity(g, Partition.single(2)) == 0.0

    def test_pure_cycle(self):
        assert directed_modularity(CYCLE, Partition.single(3)) == pytest.approx(0.0, abs=1e-15)
        assert directed_modularity_double_sum(CYCLE, np.zeros(3, int)) == pytest.approx(0.0)

    def test_empty_graph(self):
        with pytest.raises(ValueError):
            directed_modularity(DirectedGraph.from_edges(2, []), Partition.single(2))

    @given(digraphs(), st.integers(1, 4), st.randoms(use_true_random=False))
    def test_matches_double_sum(self, g, k, r):
        if g.m == 0:
            return
        p = Partition.from_assignment([r.randrange(k) for _ in range(g.n)])
        assert directed_modularity(g, p) == pytest.approx(
            directed_modularity_double_sum(g, p.assignment), abs=1e-12)


class TestPageRank:
    def test_cycle_uniform(self):
        g = DirectedGraph.from_edges(7, [(i, (i + 1) % 7) for i in range(7)])
        assert np.allclose(pagerank(g).pi, 1 / 7, atol=1e-12)

    def test_two_nodes(self):
        g = DirectedGraph.from_edges(2, [(0, 1)])
        # pi_a = 0.075 + 0.85 * pi_b / 2 ; pi_b = 0.075 + 0.85 * (pi_a + pi_b / 2)
        M = np.array([[1.0, -0.425], [-0.85, 1 - 0.425]])
        expected = np.linalg.solve(M, [0.075, 0.075])
        assert np.allclose(pagerank(g).pi, expected, atol=1e-11)

    def test_against_dense_solve(self, rng):
        for _ in range(10):
            g = random_digraph(rng, 25, 0.1, 0.3)
            for alpha in (0.5, 0.85, 0.99):
                pr = pagerank(g, alpha)
                assert abs(pr.pi.sum() - 1) < 1e-12 and (pr.pi > 0).all()
                assert np.allclose(pr.pi, stationary(google_matrix(g, alpha)), atol=1e-10)

    def test_bad_alpha(self):
        with pytest.raises(ValueError):
            pagerank(CYCLE, alpha=1.0)

    def test_non_convergence(self):
        g = random_digraph(np.random.default_rng(0), 20, 0.2, 0.2)
        with pytest.raises(ConvergenceError, match="2 iterations"):
            pagerank(g, max_iter=2)


class TestLinkRank:
    def test_two_cycles(self):
        p = part(0, 0, 0, 1, 1, 1)
        assert linkrank(TWO_CYCLES, p) == pytest.approx(0.425, abs=1e-12)
        assert linkrank_dense(TWO_CYCLES, p.assignment, 0.85) == pytest.approx(0.425, abs=1e-12)

    def test_single_community(self, rng):
        g = random_digraph(rng, 20, 0.2, 0.5)
        assert abs(linkrank(g, Partition.single(20))) < 1e-12

    def test_dangling_nodes(self):
        g = DirectedGraph.from_edges(4, [(0, 1), (1, 2), (2, 0), (0, 3)])
        for a in ([0, 0, 1, 1], [0, 1, 0, 1], [0, 0, 0, 1]):
            p = part(*a)
            assert linkrank(g, p, 0.9) == pytest.approx(linkrank_dense(g, p.assignment, 0.9),
                                                         abs=1e-10)


class TestCycleCutRatio:
    def test_three_cycle(self):
        p = part(0, 1, 1)
        assert k_cycle_cut_ratio(CYCLE, p, 3) == pytest.approx(2 / 3)
        assert k_cycle_cut_ratio(CYCLE, p, 2) == 0.0  # no reciprocal edges: documented 0
        assert k_cycle_cut_ratio(CYCLE, Partition.single(3), 3) == 0.0

    def test_reciprocal_pairs_count_both_directions(self):
        g = DirectedGraph.from_edges(4, [(0, 1), (1, 0), (2, 3), (3, 2), (1, 2)])
        assert k_cycle_cut_ratio(g, part(0, 1, 1, 1), 2) == 0.5

    def test_invalid_k(self):
        with pytest.raises(ValueError):
            k_cycle_cut_ratio(CYCLE, Partition.single(3), 4)

    @given(digraphs(), st.integers(1, 4), st.randoms(use_true_random=False))
    def test_report_complements(self, g, k, r):
        if g.m == 0:
            return
        p = Partition.from_assignment([r.randrange(k) for _ in range(g.n)])
        rep = evaluate(g, p)
        assert k_cycle_cut_ratio(g, p, 2) == pytest.approx(1.0 - rep.recip_preserved, abs=2e-16)
        assert k_cycle_cut_ratio(g, p, 3, edge_cycle_flags(g)) == pytest.approx(
            1.0 - rep.cycle3_preserved, abs=2e-16)
        cut, total = k_cycle_cut_counts(g, p, 2)
        assert cut == int((g.reciprocal & (p.assignment[g.sources] != p.assignment[g.indices])).sum())
        assert total == int(g.reciprocal.sum())
        assert 0 <= rep.recip_preserved <= 1 and 0 <= rep.cycle3_preserved <= 1


class TestEvaluate:
    def test_single_community(self, celegans):
        rep = evaluate(celegans, Partition.single(celegans.n))
        assert rep.Q == pytest.approx(0, abs=1e-12) and abs(rep.Q_LR) < 1e-12
        assert rep.recip_preserved == rep.cycle3_preserved == 1.0 and rep.cut_edges == 0

    def test_cycle_split(self):
        rep = evaluate(CYCLE, part(0, 1, 1))
        assert rep.cycle3_preserved == pytest.approx(1 / 3) and rep.cut_edges == 2


class TestCategories:
    G = DirectedGraph.from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (2, 3), (5, 0)],
                                 labels=[10, 11, 12, 13, 14, 15])

    def test_parse(self):
        lab = parse_category_labels("# c\n10 7\n11 7\n13 2\n99 1\n", self.G)
        assert lab.labels.tolist() == [1, 1, -1, 0, -1, -1]
        assert lab.n_categories == 2

    def test_conflicting_category(self):
        with pytest.raises(GraphParseError, match="more than one"):
            parse_category_labels("10 1\n10 2\n", self.G)

    def test_partition_equals_categories(self):
        lab = CategoryLabels(np.array([0, 0, 0, 1, 1, 1]))
        st_ = ground_truth_cut_stats(self.G, part(0, 0, 0, 1, 1, 1), lab)
        assert (st_.cut_edges, st_.within_cuts, st_.ratio, st_.defined) == (2, 0, 0.0, True)

    def test_single_community_flagged(self):
        lab = CategoryLabels(np.array([0, 0, 0, 1, 1, 1]))
        st_ = ground_truth_cut_stats(self.G, Partition.single(6), lab)
        assert st_.cut_edges == 0 and not st_.defined

    def test_planted_blocks_against_edge_scan(self, rng):
        n = 30
        blocks = np.repeat([0, 1, 2], 10)
        edges = [(u, v) for u in range(n) for v in range(n) if u != v and
                 rng.random() < (0.3 if blocks[u] == blocks[v] else 0.05)]
        g = DirectedGraph.from_edges(n, edges)
        p = Partition.from_assignment((blocks >= 1).astype(int))
        st_ = ground_truth_cut_stats(g, p, CategoryLabels(blocks))
        cut = [(u, v) for u, v in g.edges() if p.assignment[u] != p.assignment[v]]
        within = [(u, v) for u, v in cut if blocks[u] == blocks[v]]
        assert (st_.cut_edges, st_.within_cuts) == (len(cut), len(within))
        assert st_.ratio == len(within) / len(cut)
